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

// Pivot dynamic matching.
//
// A prediction of N ordered points is matched against a ground-truth pivot
// sequence of T points by choosing a strictly increasing T-combination of
// prediction indices that starts at 0 and ends at N-1. The matching cost of a
// combination is the mean L1 distance between paired points. Among all
// cost-minimal combinations the lexicographically smallest index list wins;
// the brute-force enumerator and the dynamic program share that rule and sum
// the per-pair terms in the same order, so they agree bit for bit.

#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pivotmap/hungarian.hpp"
#include "pivotmap/map_model.hpp"

namespace pivotmap {

struct Combination {
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
  std::size_t operator[](std::size_t n) const { return indices[n]; }

  friend bool operator==(const Combination&, const Combination&) = default;

  static Combination identity(std::size_t n) {
    Combination c;
    c.indices.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.indices[i] = i;
    return c;
  }
};

struct PivotMatch {
  Combination combination;
  double raw_cost = 0.0;  // sum of per-pair L1 distances
  double cost = 0.0;      // raw_cost / number of matched pairs
  std::vector<Point2> pivot_seq;
  // Group n holds the prediction points strictly between pivot n and n + 1.
  std::vector<std::vector<Point2>> collinear_groups;

  std::vector<std::size_t> gap_sizes() const {
    std::vector<std::size_t> sizes;
    for (const auto& g : collinear_groups) sizes.push_back(g.size());
    return sizes;
  }
  std::size_t collinear_count() const {
    std::size_t total = 0;
    for (const auto& g : collinear_groups) total += g.size();
    return total;
  }
};

inline constexpr double kBruteForceLimit = 1e6;

namespace detail {

inline void require_two_points(std::size_t n, std::size_t t) {
  require(n >= 2 && t >= 2, ErrorKind::kInvalidInput,
          "A line should contain two points at least");
}

inline void require_valid(const Combination& beta, std::size_t n, std::size_t t) {
  require(beta.size() == t, ErrorKind::kInvalidInput,
          "combination length " + std::to_string(beta.size()) + " != T = " + std::to_string(t));
  require(t >= 2 && beta[0] == 0 && beta[t - 1] == n - 1, ErrorKind::kInvalidInput,
          "combination must start at 0 and end at N - 1");
  for (std::size_t k = 1; k < t; ++k) {
    require(beta[k] > beta[k - 1] && beta[k] < n, ErrorKind::kInvalidInput,
            "combination must be strictly increasing within [0, N - 1]");
  }
}

// Left fold in ground-truth order; the DP accumulates in the same order.
inline double path_sum(std::span<const Point2> pred, std::span<const Point2> gt,
                       const Combination& beta) {
  double sum = l1_distance(gt[0], pred[beta[0]]);
  for (std::size_t n = 1; n < beta.size(); ++n) sum += l1_distance(gt[n], pred[beta[n]]);
  return sum;
}

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace detail

inline double match_cost(std::span<const Point2> pred, std::span<const Point2> gt,
                         const Combination& beta) {
  detail::require_two_points(pred.size(), gt.size());
  detail::require_valid(beta, pred.size(), gt.size());
  return detail::path_sum(pred, gt, beta) / static_cast<double>(gt.size());
}

// Splits the prediction into pivots (at beta) and the collinear points of each
// gap. Costs are left at zero; the matchers fill them in.
inline PivotMatch split_sequence(std::span<const Point2> pred, const Combination& beta) {
  detail::require_valid(beta, pred.size(), beta.size());
  PivotMatch m;
  m.combination = beta;
  for (std::size_t n = 0; n < beta.size(); ++n) {
    m.pivot_seq.push_back(pred[beta[n]]);
    if (n + 1 == beta.size()) break;
    std::vector<Point2> group(pred.begin() + static_cast<std::ptrdiff_t>(beta[n] + 1),
                              pred.begin() + static_cast<std::ptrdiff_t>(beta[n + 1]));
    m.collinear_groups.push_back(std::move(group));
  }
  return m;
}

namespace detail {

// More ground-truth points than predicted ones: pair them by index prefix.
inline PivotMatch prefix_match(std::span<const Point2> pred, std::span<const Point2> gt) {
  const std::size_t n = pred.size();
  PivotMatch m = split_sequence(pred, Combination::identity(n));
  double sum = l1_distance(gt[0], pred[0]);
  for (std::size_t j = 1; j < n; ++j) sum += l1_distance(gt[j], pred[j]);
  m.raw_cost = sum;
  m.cost = sum / static_cast<double>(n);
  return m;
}

inline PivotMatch finish(std::span<const Point2> pred, std::span<const Point2> gt,
                         Combination beta, double raw) {
  PivotMatch m = split_sequence(pred, beta);
  m.raw_cost = raw;
  m.cost = raw / static_cast<double>(gt.size());
  return m;
}

}  // namespace detail

// Exhaustive search over endpoint-constrained combinations. Intended as a
// test oracle; refuses inputs with more than 1e6 candidates.
inline PivotMatch pdm_bruteforce(std::span<const Point2> pred, std::span<const Point2> gt) {
  detail::require_two_points(pred.size(), gt.size());
  const std::size_t n = pred.size();
  const std::size_t t = gt.size();
  if (t > n) return detail::prefix_match(pred, gt);
  require(detail::binomial(n - 2, t - 2) <= kBruteForceLimit, ErrorKind::kCapacity,
          "brute-force matching exceeds 1e6 combinations");

  Combination beta;
  beta.indices.resize(t);
  for (std::size_t k = 0; k + 1 < t; ++k) beta.indices[k] = k;
  beta.indices[t - 1] = n - 1;

  Combination best = beta;
  double best_sum = std::numeric_limits<double>::infinity();
  while (true) {
    const double s = detail::path_sum(pred, gt, beta);
    if (s < best_sum) {
      best_sum = s;
      best = beta;
    }
    // Next interior combination in lexicographic order (positions 1..t-2
    // range over 1..n-2).
    std::size_t pos = t - 2;
    while (pos >= 1 && beta.indices[pos] == n - 2 - (t - 2 - pos)) --pos;
    if (pos == 0) break;
    ++beta.indices[pos];
    for (std::size_t k = pos + 1; k + 1 < t; ++k) beta.indices[k] = beta.indices[k - 1] + 1;
  }
  return detail::finish(pred, gt, std::move(best), best_sum);
}

// O(N * T) dynamic program. Row i of the table covers ground-truth point i and
// only the band i <= j <= N - T + i of prediction indices can lie on a valid
// combination. A running minimum over the previous row replaces the inner
// min over k < j.
inline PivotMatch pdm_dp(std::span<const Point2> pred, std::span<const Point2> gt) {
  detail::require_two_points(pred.size(), gt.size());
  const std::size_t n = pred.size();
  const std::size_t t = gt.size();
  if (t > n) return detail::prefix_match(pred, gt);

  const std::size_t width = n - t + 1;  // band width per row
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Stored as dp[i * width + (j - i)].
  std::vector<double> dp(t * width, kInf);
  std::vector<std::size_t> parent(t * width, 0);
  const auto at = [&](std::size_t i, std::size_t j) { return i * width + (j - i); };

  // True when the stored path ending at (row, k1) is lexicographically smaller
  // than the one ending at (row, k2). Both paths start at index 0, so walking
  // the parent links back they meet; the first difference from the front is
  // the last pair seen before the merge.
  const auto path_less = [&](std::size_t row, std::size_t k1, std::size_t k2) {
    std::size_t a = k1, b = k2, last_a = k1, last_b = k2;
    while (a != b) {
      last_a = a;
      last_b = b;
      a = parent[at(row, a)];
      b = parent[at(row, b)];
      --row;
    }
    return last_a < last_b;
  };

  dp[at(0, 0)] = l1_distance(gt[0], pred[0]);
  for (std::size_t i = 1; i < t; ++i) {
    double run_val = kInf;
    std::size_t run_k = 0;
    for (std::size_t j = i; j <= n - t + i; ++j) {
      const std::size_t k = j - 1;  // newest predecessor entering the window
      const double v = dp[at(i - 1, k)];
      if (v < run_val || (v == run_val && v != kInf && path_less(i - 1, k, run_k))) {
        run_val = v;
        run_k = k;
      }
      dp[at(i, j)] = run_val + l1_distance(gt[i], pred[j]);
      parent[at(i, j)] = run_k;
    }
  }

  Combination beta;
  beta.indices.resize(t);
  std::size_t j = n - 1;
  for (std::size_t i = t; i-- > 0;) {
    beta.indices[i] = j;
    if (i > 0) j = parent[at(i, j)];
  }
  return detail::finish(pred, gt, std::move(beta), dp[at(t - 1, n - 1)]);
}

// Closed polylines are cut into open sequences before matching: the ground
// truth at its first vertex, the prediction at the vertex nearest to the
// ground truth's first vertex. The cut vertex is repeated at the end.
struct MatchInputs {
  std::vector<Point2> pred;
  std::vector<Point2> gt;
};

inline std::vector<Point2> cut_closed(std::span<const Point2> pts, std::size_t start) {
  std::vector<Point2> out;
  out.reserve(pts.size() + 1);
  for (std::size_t k = 0; k <= pts.size(); ++k) out.push_back(pts[(start + k) % pts.size()]);
  return out;
}

inline MatchInputs prepare_for_matching(const Polyline& pred, const Polyline& gt) {
  MatchInputs in;
  in.gt = gt.closed && !gt.points.empty() ? cut_closed(gt.points, 0) : gt.points;
  if (pred.closed && !pred.points.empty() && !in.gt.empty()) {
    std::size_t nearest = 0;
    for (std::size_t k = 1; k < pred.points.size(); ++k) {
      if (distance(pred.points[k], in.gt[0]) < distance(pred.points[nearest], in.gt[0])) {
        nearest = k;
      }
    }
    in.pred = cut_closed(pred.points, nearest);
  } else {
    in.pred = pred.points;
  }
  return in;
}

inline PivotMatch match_polylines(const Polyline& pred, const Polyline& gt) {
  const MatchInputs in = prepare_for_matching(pred, gt);
  return pdm_dp(in.pred, in.gt);
}

struct InstanceAssignment {
  struct Pair {
    std::size_t pred = 0;
    std::size_t gt = 0;
    double cost = 0.0;
  };
  std::vector<Pair> pairs;  // sorted by ground-truth index
  std::vector<std::size_t> unmatched_preds;
};

// Optimal one-to-one assignment of ground-truth instances to predictions of
// one class, minimising the summed matching cost.
inline InstanceAssignment assign_instances(const std::vector<Polyline>& preds,
                                           const std::vector<Polyline>& gts,
                                           ElementClass cls = ElementClass::kDivider) {
  require(gts.size() <= preds.size(), ErrorKind::kCapacity,
          "class " + std::string(to_string(cls)) + ": " + std::to_string(gts.size()) +
              " ground-truth instances exceed " + std::to_string(preds.size()) +
              " predictions");
  const std::size_t rows = gts.size();
  const std::size_t cols = preds.size();
  std::vector<double> cost(rows * cols);
  for (std::size_t g = 0; g < rows; ++g) {
    for (std::size_t p = 0; p < cols; ++p) cost[g * cols + p] = match_polylines(preds[p], gts[g]).cost;
  }
  const auto col_of_row = solve_assignment(cost, rows, cols);
  InstanceAssignment out;
  std::vector<bool> taken(cols, false);
  for (std::size_t g = 0; g < rows; ++g) {
    out.pairs.push_back({col_of_row[g], g, cost[g * cols + col_of_row[g]]});
    taken[col_of_row[g]] = true;
  }
  for (std::size_t p = 0; p < cols; ++p) {
    if (!taken[p]) out.unmatched_preds.push_back(p);
  }
  return out;
}

}  // namespace pivotmap
