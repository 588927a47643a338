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

// Direct optimisation of N free points and N pivot logits against the DVS
// loss. Each step re-runs the matching, freezes it, and moves every
// coordinate against the sign of its subgradient. The step cap starts at the
// learning rate and is multiplied by 0.2 at 70% and again at 90% of the
// steps; below the cap each coordinate adapts its own step to sign changes.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pivotmap/dvs_loss.hpp"
#include "pivotmap/eval.hpp"
#include "pivotmap/simplify.hpp"
#include "pivotmap/synth.hpp"

namespace pivotmap {

struct FitConfig {
  std::size_t steps = 2000;
  double learning_rate = 0.05;  // m per step
  double prob_lr = 0.1;
  std::uint64_t seed = 0;
  DvsWeights weights;
  std::size_t log_interval = 10;
};

inline void validate(const FitConfig& cfg) {
  require(cfg.steps > 0 && cfg.learning_rate > 0.0 && cfg.prob_lr > 0.0 && cfg.log_interval > 0,
          ErrorKind::kInvalidInput, "fit config: steps, rates and log_interval must be positive");
  validate(cfg.weights);
}

struct FitLogEntry {
  std::size_t step = 0;
  double l_pp = 0.0;
  double l_cp = 0.0;
  double l_cls = 0.0;
  double total = 0.0;
};

struct FitTrace {
  std::vector<FitLogEntry> log;
  std::vector<Point2> init_points;
  std::vector<Point2> points;
  std::vector<double> probs;
  PivotMatch match;
  // Number of trailing steps (including the final evaluation) over which the
  // matching did not change.
  std::size_t stable_steps = 0;
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

inline double scheduled_rate(const FitConfig& cfg, std::size_t step) {
  const double frac = static_cast<double>(step) / static_cast<double>(cfg.steps);
  double rate = cfg.learning_rate;
  if (frac >= 0.7) rate *= 0.2;
  if (frac >= 0.9) rate *= 0.2;
  return rate;
}

inline FitTrace fit_points_from(std::span<const Point2> gt, std::vector<Point2> points,
                                std::vector<double> probs, const FitConfig& cfg = {}) {
  validate(cfg);
  require(gt.size() >= 2 && gt.size() <= points.size(), ErrorKind::kInvalidInput,
          "fit: requires 2 <= T <= N");
  require(probs.size() == points.size(), ErrorKind::kInvalidInput,
          "fit: one probability per point required");
  validate_probs(probs);

  FitTrace trace;
  trace.init_points = points;
  std::vector<double> logits;
  for (double p : probs) logits.push_back(logit(clamp_prob(p)));

  const auto log_entry = [&](std::size_t step, const DvsReport& r) {
    trace.log.push_back({step, r.l_pp, r.l_cp, r.l_cls, r.total});
  };
  const auto track = [&](const DvsReport& r) {
    if (trace.stable_steps > 0 && r.match.combination == trace.match.combination) {
      ++trace.stable_steps;
    } else {
      trace.stable_steps = 1;
    }
    trace.match = r.match;
  };

  // Per-coordinate step sizes: halved when the gradient sign flips, grown
  // otherwise, never above the scheduled rate.
  const std::size_t n = points.size();
  std::vector<double> size(2 * n, cfg.learning_rate);
  std::vector<double> last_sign(2 * n, 0.0);
  const auto move = [&](double& coord, double g, std::size_t k, double rate) {
    const double sign = detail::l1_subgradient(g);
    if (sign * last_sign[k] < 0.0) {
      size[k] *= 0.5;
    } else if (sign != 0.0) {
      size[k] *= 1.2;
    }
    size[k] = std::min(size[k], rate);
    last_sign[k] = sign;
    coord -= size[k] * sign;
  };

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) probs[i] = sigmoid(logits[i]);
    const DvsReport r = dvs_total(points, probs, gt, cfg.weights);
    track(r);
    if (step % cfg.log_interval == 0) log_entry(step, r);
    const double rate = scheduled_rate(cfg, step);
    for (std::size_t i = 0; i < n; ++i) {
      move(points[i].x, r.grad[i].x, 2 * i, rate);
      move(points[i].y, r.grad[i].y, 2 * i + 1, rate);
      logits[i] -= cfg.prob_lr * r.cls_grad[i];
    }
  }
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = sigmoid(logits[i]);
  const DvsReport final_report = dvs_total(points, probs, gt, cfg.weights);
  track(final_report);
  log_entry(cfg.steps, final_report);
  trace.points = std::move(points);
  trace.probs = std::move(probs);
  return trace;
}

// Random start: N points uniform in the ground truth's bounding box padded by
// 1 m, every probability at 0.5.
inline FitTrace fit_points(std::span<const Point2> gt, std::size_t n, const FitConfig& cfg = {}) {
  require(gt.size() >= 2 && gt.size() <= n, ErrorKind::kInvalidInput, "fit: requires 2 <= T <= N");
  double lo_x = gt[0].x, hi_x = gt[0].x, lo_y = gt[0].y, hi_y = gt[0].y;
  for (const Point2& p : gt) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  SeededRng rng(cfg.seed);
  std::vector<Point2> init;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(lo_x - 1.0, hi_x + 1.0);
    const double y = rng.uniform(lo_y - 1.0, hi_y + 1.0);
    init.push_back({x, y});
  }
  return fit_points_from(gt, std::move(init), std::vector<double>(n, 0.5), cfg);
}

inline constexpr double kPivotThreshold = 0.5;

// Points whose pivot probability exceeds 0.5, in order.
inline std::vector<Point2> reconstruct_pivots(std::span<const Point2> points,
                                              std::span<const double> probs) {
  std::vector<Point2> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (probs[i] > kPivotThreshold) out.push_back(points[i]);
  }
  return out;
}

struct RoundTripReport {
  std::size_t pivot_count = 0;      // T fed to the fit (closed lines repeat the start)
  std::size_t recovered_count = 0;  // points above the probability threshold
  double chamfer = 0.0;             // reconstruction vs dense original, m
  Polyline pivots;
  Polyline reconstructed;
  FitTrace trace;
};

// simplify -> fit -> threshold -> Chamfer against the dense original.
inline RoundTripReport round_trip(const Polyline& gt_dense, const SimplifyConfig& simplify_cfg,
                                  std::size_t n, const FitConfig& fit_cfg = {},
                                  double chamfer_step = 0.1) {
  RoundTripReport rep;
  rep.pivots = vw_simplify(gt_dense, simplify_cfg);
  const std::vector<Point2> target =
      rep.pivots.closed ? cut_closed(rep.pivots.points, 0) : rep.pivots.points;
  rep.pivot_count = target.size();
  rep.trace = fit_points(target, n, fit_cfg);
  rep.reconstructed.points = reconstruct_pivots(rep.trace.points, rep.trace.probs);
  rep.recovered_count = rep.reconstructed.size();
  rep.chamfer = rep.recovered_count >= 1
                    ? chamfer_distance(rep.reconstructed, gt_dense, chamfer_step)
                    : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace pivotmap
