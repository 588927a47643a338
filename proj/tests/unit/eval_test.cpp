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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pivotmap/eval.hpp"

namespace pivotmap {
namespace {

Polyline segment(double y, double x0 = -10, double x1 = 10) { return {{{x0, y}, {x1, y}}, false}; }

MapElement pred_el(ElementClass c, Polyline l, double score) { return {c, std::move(l), score}; }
MapElement gt_el(ElementClass c, Polyline l) { return {c, std::move(l), std::nullopt}; }

TEST(Resample, EndpointsAndSpacing) {
  const auto s = resample(segment(0, 0, 1), 0.3);
  ASSERT_EQ(s.size(), 5u);
  EXPECT_EQ(s.front(), (Point2{0, 0}));
  EXPECT_EQ(s.back(), (Point2{1, 0}));
  const auto ring = resample({{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true}, 0.5);
  EXPECT_EQ(ring.size(), 8u);
}

TEST(Chamfer, Examples) {
  const Polyline a{{{0, 0}, {3, 1}, {5, 0}}, false};
  EXPECT_EQ(chamfer_distance(a, a), 0.0);
  EXPECT_NEAR(chamfer_distance(segment(0), segment(0.5)), 0.5, 1e-12);
  const Polyline b{{{0, 1}, {4, -1}}, false};
  EXPECT_EQ(chamfer_distance(a, b), chamfer_distance(b, a));
}

TEST(Chamfer, ConvergesAsStepShrinks) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int rep = 0; rep < 20; ++rep) {
    Polyline a, b;
    for (int i = 0; i <= 40; ++i) {
      const double t = 0.25 * i;
      a.points.push_back({t, std::sin(t)});
      b.points.push_back({t, std::cos(0.7 * t) + 0.1 * u(rng) / 10.0});
    }
    for (double step : {0.4, 0.2, 0.1}) {
      EXPECT_LT(std::abs(chamfer_distance(a, b, step) - chamfer_distance(a, b, step / 2)), step);
    }
  }
}

TEST(MatchForEval, Examples) {
  const std::vector<MapElement> gt = {gt_el(ElementClass::kDivider, segment(0))};
  const auto one = match_for_eval(std::vector<MapElement>{pred_el(ElementClass::kDivider, segment(0), 0.7)}, gt, 0.5);
  EXPECT_TRUE(one[0].tp);
  const auto two = match_for_eval(std::vector<MapElement>{pred_el(ElementClass::kDivider, segment(0), 0.6),
                                                          pred_el(ElementClass::kDivider, segment(0), 0.9)},
                                  gt, 0.5);
  EXPECT_FALSE(two[0].tp);
  EXPECT_TRUE(two[1].tp);
  const auto far = match_for_eval(std::vector<MapElement>{pred_el(ElementClass::kDivider, segment(0.6), 0.9)}, gt, 0.5);
  EXPECT_FALSE(far[0].tp);
  EXPECT_THROW(match_for_eval(gt, gt, 0.5), Error);
}

TEST(MatchForEval, StrictThreshold) {
  const std::vector<double> scores = {0.9};
  const std::vector<double> exact = {0.5};
  EXPECT_FALSE(match_for_eval(scores, exact, 1, 0.5)[0].tp);
  EXPECT_TRUE(match_for_eval(scores, exact, 1, 0.50001)[0].tp);
}

TEST(AveragePrecision, Examples) {
  EXPECT_EQ(average_precision({{0.9, true}, {0.5, true}}, 2), 1.0);
  EXPECT_EQ(average_precision({{0.9, true}, {0.8, false}}, 1), 1.0);
  EXPECT_EQ(average_precision({{0.9, false}, {0.8, true}}, 1), 0.5);
  EXPECT_FALSE(average_precision({}, 0).has_value());
  EXPECT_EQ(average_precision({{0.4, false}}, 0), 0.0);
  EXPECT_EQ(average_precision({}, 3), 0.0);
  // Hand-computed: TP, FP, TP over 2 GT -> 0.5 * 1 + 0.5 * 2/3.
  EXPECT_DOUBLE_EQ(*average_precision({{0.9, true}, {0.8, false}, {0.7, true}}, 2), 0.5 + 1.0 / 3.0);
}

TEST(AveragePrecision, RankOnly) {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<Detection> dets, squashed;
    std::size_t tps = 0;
    for (int i = 0; i < 20; ++i) {
      const double s = u(rng);
      const bool tp = coin(rng);
      tps += tp;
      dets.push_back({s, tp});
      squashed.push_back({std::pow(s, 3.0) / 2.0, tp});
    }
    EXPECT_EQ(average_precision(dets, tps + 2), average_precision(squashed, tps + 2));
  }
}

TEST(Evaluate, PerfectAndEmpty) {
  LocalMap gt{"f", {}, {gt_el(ElementClass::kDivider, segment(0)), gt_el(ElementClass::kBoundary, segment(5)),
                        gt_el(ElementClass::kPedCrossing, {{{0, 0}, {2, 0}, {2, 2}, {0, 2}}, true})}};
  LocalMap pred = gt;
  for (auto& e : pred.elements) e.score = 1.0;
  const EvalResult r = evaluate(std::vector<LocalMap>{pred}, std::vector<LocalMap>{gt});
  EXPECT_EQ(r.mean_ap, 1.0);
  LocalMap nothing{"f", {}, {}};
  const EvalResult z = evaluate(std::vector<LocalMap>{nothing}, std::vector<LocalMap>{gt});
  for (ElementClass c : kAllClasses) {
    for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(z.at(c, t), 0.0);
  }
  EXPECT_EQ(z.mean_ap, 0.0);
}

TEST(Evaluate, FrameMismatchListsMissing) {
  const std::vector<LocalMap> preds = {{"a", {}, {}}, {"c", {}, {}}};
  const std::vector<LocalMap> gts = {{"a", {}, {}}, {"b", {}, {}}};
  try {
    evaluate(preds, gts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("prediction for b"), std::string::npos);
    EXPECT_NE(msg.find("ground truth for c"), std::string::npos);
  }
}

TEST(Evaluate, MonotoneInThresholdAndDeterministicAcrossJobs) {
  std::mt19937_64 rng(63);
  std::uniform_real_distribution<double> off(0.0, 1.5), sc(0.0, 1.0), y(-25.0, 25.0);
  std::vector<LocalMap> preds, gts;
  for (int f = 0; f < 40; ++f) {
    LocalMap g{"f" + std::to_string(f), {}, {}}, p{g.frame_id, {}, {}};
    for (int k = 0; k < 6; ++k) {
      const ElementClass c = kAllClasses[static_cast<std::size_t>(k) % 3];
      const double base = y(rng);
      g.elements.push_back(gt_el(c, segment(base)));
      p.elements.push_back(pred_el(c, segment(base + off(rng)), sc(rng)));
      if (k % 2 == 0) p.elements.push_back(pred_el(c, segment(y(rng)), sc(rng)));
    }
    gts.push_back(g);
    preds.push_back(p);
  }
  const EvalResult a = evaluate(preds, gts, {}, 1);
  const EvalResult b = evaluate(preds, gts, {}, 4);
  for (ElementClass c : kAllClasses) {
    for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(a.at(c, t), b.at(c, t));
    EXPECT_LE(*a.at(c, 0), *a.at(c, 1));
    EXPECT_LE(*a.at(c, 1), *a.at(c, 2));
  }
  EXPECT_EQ(a.mean_ap, b.mean_ap);
}

TEST(EvalConfig, Validation) {
  EXPECT_THROW(validate(EvalConfig{{0.5, 0.2}, 0.1}), Error);
  EXPECT_THROW(validate(EvalConfig{{0.2}, 0.0}), Error);
  EXPECT_NO_THROW(validate(EvalConfig{kEasyThresholds, 0.1}));
}

}  // namespace
}  // namespace pivotmap
