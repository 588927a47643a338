/*
 * Copyright 2026 The pivotmap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "pivotmap/hungarian.hpp"
#include "pivotmap/pivot_match.hpp"

namespace pivotmap {
namespace {

using Pts = std::vector<Point2>;
using Idx = std::vector<std::size_t>;

Pts random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  Pts pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

// Recursive enumeration in lexicographic order; the first strict minimum
// wins, so ties resolve to the lexicographically smallest combination.
struct RecursiveOracle {
  const Pts& pred;
  const Pts& gt;
  double best = std::numeric_limits<double>::infinity();
  Idx best_beta{};

  void run() {
    Idx beta{0};
    recurse(beta);
  }
  void recurse(Idx& beta) {
    const std::size_t n = pred.size(), t = gt.size();
    if (beta.size() == t - 1) {
      beta.push_back(n - 1);
      double s = 0.0;
      for (std::size_t k = 0; k < t; ++k) s += l1_distance(gt[k], pred[beta[k]]);
      if (s < best) {
        best = s;
        best_beta = beta;
      }
      beta.pop_back();
      return;
    }
    const std::size_t remaining = t - 1 - beta.size();
    for (std::size_t j = beta.back() + 1; j + remaining < n; ++j) {
      beta.push_back(j);
      recurse(beta);
      beta.pop_back();
    }
  }
};

TEST(MatchCost, Examples) {
  const Pts a = {{0, 0}, {1, 2}};
  EXPECT_EQ(match_cost(a, a, Combination::identity(2)), 0.0);
  EXPECT_DOUBLE_EQ(match_cost(Pts{{0, 0}, {2, 0}}, Pts{{0, 0}, {1, 1}}, Combination{{0, 1}}), 1.0);
  EXPECT_DOUBLE_EQ(match_cost(Pts{{0, 0}, {1, 0}, {3, 0}}, Pts{{0, 0}, {3, 1}}, Combination{{0, 2}}),
                   0.5);
}

TEST(MatchCost, RejectsInvalidCombination) {
  const Pts p = {{0, 0}, {1, 0}, {2, 0}};
  const Pts g = {{0, 0}, {2, 0}};
  EXPECT_THROW(match_cost(p, g, Combination{{1, 2}}), Error);
  EXPECT_THROW(match_cost(p, g, Combination{{0, 1}}), Error);
  EXPECT_THROW(match_cost(p, Pts{{0, 0}, {1, 0}, {2, 0}}, Combination{{0, 0, 2}}), Error);
}

TEST(PdmBruteforce, Examples) {
  const Pts p3 = {{0, 0}, {5, 5}, {1, 0}};
  EXPECT_EQ(pdm_bruteforce(p3, Pts{{0, 0}, {1, 0}}).combination.indices, (Idx{0, 2}));
  const Pts same = {{0, 0}, {1, 3}, {2, 2}};
  const PivotMatch m = pdm_bruteforce(same, same);
  EXPECT_EQ(m.combination, Combination::identity(3));
  EXPECT_EQ(m.cost, 0.0);
  const PivotMatch c = pdm_bruteforce(Pts{{0, 0}, {1, 0.1}, {2, 0}, {3, 1}}, Pts{{0, 0}, {2, 0}, {3, 1}});
  EXPECT_EQ(c.combination.indices, (Idx{0, 2, 3}));
  EXPECT_EQ(c.cost, 0.0);
}

TEST(PdmBruteforce, RefusesHugeSearch) {
  std::mt19937_64 rng(31);
  try {
    pdm_bruteforce(random_points(rng, 60), random_points(rng, 30));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCapacity);
  }
}

TEST(PdmDp, TooShortLine) {
  try {
    pdm_dp(Pts{{0, 0}}, Pts{{0, 0}, {1, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
    EXPECT_STREQ(e.what(), "A line should contain two points at least");
  }
}

TEST(PdmDp, PrefixCaseWhenGtLonger) {
  const Pts pred = {{0, 0}, {1, 1}};
  const Pts gt = {{1, 0}, {1, 3}, {4, 4}};
  const PivotMatch m = pdm_dp(pred, gt);
  EXPECT_EQ(m.combination.indices, (Idx{0, 1}));
  EXPECT_EQ(m.raw_cost, 1.0 + 2.0);
  EXPECT_EQ(m.cost, 1.5);
}

TEST(PdmDp, AgreesWithRecursiveOracle) {
  std::mt19937_64 rng(32);
  for (std::size_t n = 2; n <= 10; ++n) {
    for (std::size_t t = 2; t <= n; ++t) {
      for (int rep = 0; rep < 40; ++rep) {
        Pts pred = random_points(rng, n), gt = random_points(rng, t);
        if (rep % 2 == 0) {
          for (auto& p : pred) p = {std::round(p.x / 10), std::round(p.y / 10)};
          for (auto& p : gt) p = {std::round(p.x / 10), std::round(p.y / 10)};
        }
        RecursiveOracle oracle{pred, gt};
        oracle.run();
        const PivotMatch m = pdm_dp(pred, gt);
        ASSERT_EQ(m.raw_cost, oracle.best);
        ASSERT_EQ(m.combination.indices, oracle.best_beta);
        EXPECT_EQ(m.cost, oracle.best / static_cast<double>(t));
      }
    }
  }
}

TEST(PdmDp, EndpointsAndGroups) {
  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 2 + rep % 30;
    const std::size_t t = 2 + static_cast<std::size_t>(rep) % (n - 1);
    const Pts pred = random_points(rng, n);
    const PivotMatch m = pdm_dp(pred, random_points(rng, t));
    EXPECT_EQ(m.combination.indices.front(), 0u);
    EXPECT_EQ(m.combination.indices.back(), n - 1);
    EXPECT_EQ(m.pivot_seq.size(), t);
    EXPECT_EQ(m.collinear_count(), n - t);
    for (std::size_t k = 0; k < t; ++k) EXPECT_EQ(m.pivot_seq[k], pred[m.combination[k]]);
  }
}

TEST(PdmDp, AppendingSharedPointNeverRaisesPerPointCost) {
  std::mt19937_64 rng(34);
  for (int rep = 0; rep < 300; ++rep) {
    Pts pred = random_points(rng, 8), gt = random_points(rng, 4);
    const double before = pdm_dp(pred, gt).cost;
    const Point2 tail{20.0, 40.0};
    pred.push_back(tail);
    gt.push_back(tail);
    EXPECT_LE(pdm_dp(pred, gt).cost, before + 1e-12);
  }
}

TEST(SplitSequence, GapSizes) {
  Pts pred(4);
  for (std::size_t i = 0; i < 4; ++i) pred[i] = {static_cast<double>(i), 0};
  const PivotMatch a = split_sequence(pred, Combination{{0, 3}});
  EXPECT_EQ(a.gap_sizes(), (Idx{2}));
  EXPECT_EQ(a.collinear_groups[0], (Pts{{1, 0}, {2, 0}}));
  EXPECT_EQ(split_sequence(pred, Combination::identity(4)).collinear_count(), 0u);
  Pts ten(10);
  for (std::size_t i = 0; i < 10; ++i) ten[i] = {static_cast<double>(i), 1};
  const PivotMatch b = split_sequence(ten, Combination{{0, 2, 7, 9}});
  EXPECT_EQ(b.gap_sizes(), (Idx{1, 4, 1}));
  EXPECT_EQ(b.collinear_count(), 6u);
}

TEST(ClosedMatching, RotationInvariant) {
  const Polyline gt{{{0, 0}, {4, 0}, {4, 3}, {0, 3}}, true};
  const Polyline pred{{{4, 0}, {4, 1.5}, {4, 3}, {0, 3}, {0, 0}, {2, 0}}, true};
  const PivotMatch m = match_polylines(pred, gt);
  EXPECT_EQ(m.cost, 0.0);
}

TEST(SolveAssignment, MatchesPermutationOracle) {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t rows = 1 + rep % 4, cols = rows + rep % 3;
    std::vector<double> cost(rows * cols);
    for (auto& c : cost) c = std::round(u(rng));
    const auto asg = solve_assignment(cost, rows, cols);
    double got = 0.0;
    for (std::size_t r = 0; r < rows; ++r) got += cost[r * cols + asg[r]];
    Idx perm(cols);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double s = 0.0;
      for (std::size_t r = 0; r < rows; ++r) s += cost[r * cols + perm[r]];
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_DOUBLE_EQ(got, best);
    Idx sorted = asg;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  }
}

TEST(AssignInstances, Examples) {
  const Polyline g1{{{0, 0}, {5, 0}}, false};
  const Polyline g2{{{0, 10}, {5, 10}}, false};
  const Polyline near1{{{0, 0.2}, {5, 0.2}}, false};
  const Polyline near2{{{0, 10.1}, {5, 10.1}}, false};

  const InstanceAssignment one = assign_instances({near1}, {g1});
  ASSERT_EQ(one.pairs.size(), 1u);
  EXPECT_TRUE(one.unmatched_preds.empty());

  const InstanceAssignment two = assign_instances({near2, near1}, {g1, g2});
  ASSERT_EQ(two.pairs.size(), 2u);
  EXPECT_EQ(two.pairs[0].pred, 1u);
  EXPECT_EQ(two.pairs[1].pred, 0u);

  const InstanceAssignment three = assign_instances({near1, near2, g2}, {g1});
  EXPECT_EQ(three.pairs.size(), 1u);
  EXPECT_EQ(three.unmatched_preds.size(), 2u);
  EXPECT_EQ(three.pairs[0].pred, 0u);

  try {
    assign_instances({near1}, {g1, g2}, ElementClass::kBoundary);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCapacity);
    EXPECT_NE(std::string(e.what()).find("boundary"), std::string::npos);
  }
}

}  // namespace
}  // namespace pivotmap
