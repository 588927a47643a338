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

// Dynamic vectorized sequence loss.
//
//   total = alpha1 * l_pp + alpha2 * l_cp + alpha3 * l_cls
//
// l_pp  mean L1 between matched prediction pivots and ground-truth pivots.
// l_cp  mean L1 between each collinear prediction point and its target on the
//       ground-truth segment, placed at theta = r / (R + 1) for rank r of R.
// l_cls mean BCE of the per-point pivot probability against the 0/1 label
//       given by the matching.
//
// Gradients treat the matching as fixed. L1 subgradients are 0 at a zero
// residual; BCE gradients are 0 where the probability was clamped.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "pivotmap/pivot_match.hpp"

namespace pivotmap {

inline constexpr double kProbClamp = 1e-7;

struct DvsWeights {
  double alpha1 = 5.0;
  double alpha2 = 2.0;
  double alpha3 = 2.0;
};

inline void validate(const DvsWeights& w) {
  require(w.alpha1 >= 0.0 && w.alpha2 >= 0.0 && w.alpha3 >= 0.0, ErrorKind::kInvalidInput,
          "dvs weights must be non-negative");
}

struct DvsReport {
  double l_pp = 0.0;
  double l_cp = 0.0;
  double l_cls = 0.0;
  double total = 0.0;
  std::vector<Point2> grad;        // d total / d (x, y), per prediction point
  std::vector<double> prob_grad;   // d total / d p
  std::vector<double> cls_grad;    // d total / d logit, with p = sigmoid(logit)
  PivotMatch match;
};

inline double pivotal_loss(const PivotMatch& match, std::span<const Point2> gt) {
  require(match.pivot_seq.size() == gt.size() && !gt.empty(), ErrorKind::kInvalidInput,
          "pivotal loss: pivot sequence and ground truth differ in length");
  double sum = l1_distance(match.pivot_seq[0], gt[0]);
  for (std::size_t n = 1; n < gt.size(); ++n) sum += l1_distance(match.pivot_seq[n], gt[n]);
  return sum / static_cast<double>(gt.size());
}

inline std::vector<std::vector<Point2>> collinear_targets(std::span<const Point2> gt_pivots,
                                                          std::span<const std::size_t> gap_sizes) {
  require(gt_pivots.size() >= 2, ErrorKind::kInvalidInput,
          "collinear targets need at least two pivots");
  require(gap_sizes.size() + 1 == gt_pivots.size(), ErrorKind::kInvalidInput,
          "collinear targets: expected T - 1 gap sizes");
  std::vector<std::vector<Point2>> targets(gap_sizes.size());
  for (std::size_t n = 0; n < gap_sizes.size(); ++n) {
    const double denom = static_cast<double>(gap_sizes[n] + 1);
    for (std::size_t r = 1; r <= gap_sizes[n]; ++r) {
      targets[n].push_back(lerp(gt_pivots[n], gt_pivots[n + 1], static_cast<double>(r) / denom));
    }
  }
  return targets;
}

inline double collinear_loss(const PivotMatch& match, std::span<const Point2> gt) {
  const std::size_t count = match.collinear_count();
  if (count == 0) return 0.0;
  const auto gaps = match.gap_sizes();
  const auto targets = collinear_targets(gt, gaps);
  double sum = 0.0;
  for (std::size_t n = 0; n < gaps.size(); ++n) {
    for (std::size_t r = 0; r < gaps[n]; ++r) {
      sum += l1_distance(match.collinear_groups[n][r], targets[n][r]);
    }
  }
  return sum / static_cast<double>(count);
}

inline std::vector<double> pivot_labels(const PivotMatch& match, std::size_t n) {
  std::vector<double> labels(n, 0.0);
  for (std::size_t idx : match.combination.indices) {
    require(idx < n, ErrorKind::kInvalidInput, "pivot labels: combination index out of range");
    labels[idx] = 1.0;
  }
  return labels;
}

inline double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

inline double bce(double p, double label) {
  const double q = clamp_prob(p);
  return -(label * std::log(q) + (1.0 - label) * std::log(1.0 - q));
}

inline void validate_probs(std::span<const double> probs) {
  for (double p : probs) {
    require(p >= 0.0 && p <= 1.0, ErrorKind::kInvalidInput,
            "pivot probabilities must lie in [0, 1]");
  }
}

inline double pivot_cls_loss(std::span<const double> probs, const PivotMatch& match) {
  validate_probs(probs);
  require(!probs.empty(), ErrorKind::kInvalidInput, "pivot classification: no probabilities");
  const auto labels = pivot_labels(match, probs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) sum += bce(probs[i], labels[i]);
  return sum / static_cast<double>(probs.size());
}

namespace detail {

inline double l1_subgradient(double residual) {
  if (residual > 0.0) return 1.0;
  if (residual < 0.0) return -1.0;
  return 0.0;
}

inline Point2 l1_subgradient(Point2 residual) {
  return {l1_subgradient(residual.x), l1_subgradient(residual.y)};
}

}  // namespace detail

// Full loss for a given combination (no re-matching). When the ground truth
// is longer than the prediction the combination is the identity and only the
// first N ground-truth points take part.
inline DvsReport dvs_for_combination(std::span<const Point2> pred, std::span<const double> probs,
                                     std::span<const Point2> gt, const Combination& beta,
                                     const DvsWeights& w = {}) {
  validate(w);
  require(probs.size() == pred.size(), ErrorKind::kInvalidInput,
          "dvs: one probability per prediction point required");
  const std::span<const Point2> gt_used = gt.subspan(0, std::min(gt.size(), pred.size()));

  DvsReport r;
  r.match = split_sequence(pred, beta);
  r.match.raw_cost = detail::path_sum(pred, gt_used, beta);
  r.match.cost = r.match.raw_cost / static_cast<double>(gt_used.size());
  r.l_pp = pivotal_loss(r.match, gt_used);
  r.l_cp = collinear_loss(r.match, gt_used);
  r.l_cls = pivot_cls_loss(probs, r.match);
  r.total = w.alpha1 * r.l_pp + w.alpha2 * r.l_cp + w.alpha3 * r.l_cls;

  const std::size_t n = pred.size();
  const std::size_t t = gt_used.size();
  r.grad.assign(n, Point2{});
  const double pp_scale = w.alpha1 / static_cast<double>(t);
  for (std::size_t k = 0; k < t; ++k) {
    r.grad[beta[k]] = pp_scale * detail::l1_subgradient(pred[beta[k]] - gt_used[k]);
  }
  if (const std::size_t count = r.match.collinear_count(); count > 0) {
    const double cp_scale = w.alpha2 / static_cast<double>(count);
    const auto gaps = r.match.gap_sizes();
    const auto targets = collinear_targets(gt_used, gaps);
    for (std::size_t g = 0; g < gaps.size(); ++g) {
      for (std::size_t rank = 0; rank < gaps[g]; ++rank) {
        const std::size_t idx = beta[g] + 1 + rank;
        r.grad[idx] = cp_scale * detail::l1_subgradient(pred[idx] - targets[g][rank]);
      }
    }
  }

  const auto labels = pivot_labels(r.match, n);
  const double cls_scale = w.alpha3 / static_cast<double>(n);
  r.prob_grad.assign(n, 0.0);
  r.cls_grad.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = probs[i];
    if (p <= kProbClamp || p >= 1.0 - kProbClamp) continue;
    r.prob_grad[i] = cls_scale * (p - labels[i]) / (p * (1.0 - p));
    r.cls_grad[i] = cls_scale * (p - labels[i]);
  }
  return r;
}

inline DvsReport dvs_total(std::span<const Point2> pred, std::span<const double> probs,
                           std::span<const Point2> gt, const DvsWeights& w = {}) {
  const PivotMatch m = pdm_dp(pred, gt);
  return dvs_for_combination(pred, probs, gt, m.combination, w);
}

}  // namespace pivotmap
