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

// Chamfer-distance average precision.
//
// Polylines are resampled by arc length and compared with the symmetric mean
// nearest-sample distance. Per class and threshold, predictions are matched
// greedily in descending score order (a prediction is a true positive when an
// unmatched ground truth lies strictly closer than the threshold), then AP is
// the area under the monotone precision envelope over all frames.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pivotmap/map_model.hpp"
#include "pivotmap/parallel.hpp"

namespace pivotmap {

struct EvalConfig {
  std::vector<double> thresholds = {0.2, 0.5, 1.0};
  double sample_step = 0.1;
};

inline const std::vector<double> kEasyThresholds = {0.5, 1.0, 1.5};

inline void validate(const EvalConfig& cfg) {
  require(!cfg.thresholds.empty(), ErrorKind::kInvalidInput, "eval: no thresholds");
  for (std::size_t i = 0; i < cfg.thresholds.size(); ++i) {
    require(cfg.thresholds[i] > 0.0 && (i == 0 || cfg.thresholds[i] > cfg.thresholds[i - 1]),
            ErrorKind::kInvalidInput, "eval: thresholds must be positive and ascending");
  }
  require(cfg.sample_step > 0.0, ErrorKind::kInvalidInput, "eval: sample_step must be > 0");
}

// Arc-length samples every `step`. Open lines always include both endpoints;
// closed lines are sampled around the full perimeter without repeating the
// start.
inline std::vector<Point2> resample(const Polyline& line, double step) {
  require(step > 0.0, ErrorKind::kInvalidInput, "resample: step must be > 0");
  const ArcWalker walker(line.points, line.closed);
  const double length = walker.length();
  std::vector<Point2> out;
  for (std::size_t k = 0;; ++k) {
    const double s = static_cast<double>(k) * step;
    if (s >= length) break;
    out.push_back(walker.at(s));
  }
  if (!line.closed || out.empty()) out.push_back(walker.at(length));
  return out;
}

namespace detail {
inline double mean_nearest(std::span<const Point2> from, std::span<const Point2> to) {
  double sum = 0.0;
  for (const Point2& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point2& q : to) {
      const Point2 d = p - q;
      best = std::min(best, d.x * d.x + d.y * d.y);
    }
    sum += std::sqrt(best);
  }
  return sum / static_cast<double>(from.size());
}
}  // namespace detail

inline double chamfer_samples(std::span<const Point2> a, std::span<const Point2> b) {
  return 0.5 * (detail::mean_nearest(a, b) + detail::mean_nearest(b, a));
}

inline double chamfer_distance(const Polyline& a, const Polyline& b, double step = 0.1) {
  const auto sa = resample(a, step);
  const auto sb = resample(b, step);
  return chamfer_samples(sa, sb);
}

// chamfer[p * gts + g] for every prediction / ground-truth pair.
inline std::vector<double> chamfer_matrix(std::span<const Polyline> preds,
                                          std::span<const Polyline> gts, double step) {
  std::vector<std::vector<Point2>> gs;
  for (const Polyline& g : gts) gs.push_back(resample(g, step));
  std::vector<double> out;
  out.reserve(preds.size() * gts.size());
  for (const Polyline& p : preds) {
    const auto ps = resample(p, step);
    for (const auto& g : gs) out.push_back(chamfer_samples(ps, g));
  }
  return out;
}

struct Detection {
  double score = 0.0;
  bool tp = false;
};

// Greedy score-ordered matching given a precomputed Chamfer matrix.
// Returns one Detection per prediction, in input order.
inline std::vector<Detection> match_for_eval(std::span<const double> scores,
                                             std::span<const double> chamfer,
                                             std::size_t num_gt, double threshold) {
  require(chamfer.size() == scores.size() * num_gt, ErrorKind::kInvalidInput,
          "match_for_eval: chamfer matrix size mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<bool> gt_taken(num_gt, false);
  std::vector<Detection> out(scores.size());
  for (std::size_t p : order) {
    out[p].score = scores[p];
    std::optional<std::size_t> best;
    for (std::size_t g = 0; g < num_gt; ++g) {
      const double d = chamfer[p * num_gt + g];
      if (gt_taken[g] || !(d < threshold)) continue;
      if (!best || d < chamfer[p * num_gt + *best]) best = g;
    }
    if (best) {
      gt_taken[*best] = true;
      out[p].tp = true;
    }
  }
  return out;
}

inline std::vector<Detection> match_for_eval(std::span<const MapElement> preds,
                                             std::span<const MapElement> gts, double threshold,
                                             double step = 0.1) {
  std::vector<double> scores;
  std::vector<Polyline> pl, gl;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    require(preds[i].score.has_value(), ErrorKind::kInvalidInput,
            "prediction " + std::to_string(i) + " has no score");
    scores.push_back(*preds[i].score);
    pl.push_back(preds[i].line);
  }
  for (const MapElement& g : gts) gl.push_back(g.line);
  return match_for_eval(scores, chamfer_matrix(pl, gl, step), gl.size(), threshold);
}

// All-point AP over the monotone precision envelope. Undefined (nullopt) when
// there is neither ground truth nor any prediction; predictions without any
// ground truth score 0.
inline std::optional<double> average_precision(std::vector<Detection> dets, std::size_t num_gt) {
  if (num_gt == 0) {
    if (dets.empty()) return std::nullopt;
    return 0.0;
  }
  std::stable_sort(dets.begin(), dets.end(),
                   [](const Detection& a, const Detection& b) { return a.score > b.score; });
  std::vector<double> precision, recall;
  double tp = 0.0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].tp) tp += 1.0;
    precision.push_back(tp / static_cast<double>(i + 1));
    recall.push_back(tp / static_cast<double>(num_gt));
  }
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return ap;
}

struct EvalResult {
  std::vector<double> thresholds;
  // ap[class][threshold index]
  std::array<std::vector<std::optional<double>>, 3> ap;
  std::array<std::optional<double>, 3> class_ap;  // mean over thresholds
  std::optional<double> mean_ap;                  // mean over classes

  std::optional<double> at(ElementClass c, std::size_t t) const {
    return ap[static_cast<std::size_t>(c)][t];
  }
  std::optional<double> of(ElementClass c) const { return class_ap[static_cast<std::size_t>(c)]; }
};

// Detections of one frame: dets[class][threshold], one entry per prediction.
struct FrameEvalResult {
  std::array<std::vector<std::vector<Detection>>, 3> dets;
  std::array<std::size_t, 3> num_gt{};
};

namespace detail {

inline FrameEvalResult evaluate_frame(const LocalMap& pred, const LocalMap& gt, const EvalConfig& cfg) {
  FrameEvalResult fe;
  for (ElementClass c : kAllClasses) {
    const auto ci = static_cast<std::size_t>(c);
    std::vector<double> scores;
    std::vector<Polyline> pl, gl;
    for (std::size_t i = 0; i < pred.elements.size(); ++i) {
      const MapElement& e = pred.elements[i];
      if (e.cls != c) continue;
      require(e.score.has_value(), ErrorKind::kInvalidInput,
              "frame " + pred.frame_id + ": prediction " + std::to_string(i) + " has no score");
      scores.push_back(*e.score);
      pl.push_back(e.line);
    }
    for (const MapElement& e : gt.elements) {
      if (e.cls == c) gl.push_back(e.line);
    }
    fe.num_gt[ci] = gl.size();
    const auto chamfer = chamfer_matrix(pl, gl, cfg.sample_step);
    for (double thr : cfg.thresholds) {
      fe.dets[ci].push_back(match_for_eval(scores, chamfer, gl.size(), thr));
    }
  }
  return fe;
}

inline std::optional<double> mean_of(std::span<const std::optional<double>> values) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace detail

// Accumulates per-frame detections; the global score sort happens in
// result(), after all frames are in.
class EvalAccumulator {
 public:
  explicit EvalAccumulator(EvalConfig cfg) : cfg_(std::move(cfg)) {
    validate(cfg_);
    for (auto& per_class : dets_) per_class.resize(cfg_.thresholds.size());
  }

  const EvalConfig& config() const { return cfg_; }

  FrameEvalResult evaluate_frame(const LocalMap& pred, const LocalMap& gt) const {
    return detail::evaluate_frame(pred, gt, cfg_);
  }

  void add(const FrameEvalResult& frame) {
    for (std::size_t c = 0; c < 3; ++c) {
      num_gt_[c] += frame.num_gt[c];
      for (std::size_t t = 0; t < cfg_.thresholds.size(); ++t) {
        dets_[c][t].insert(dets_[c][t].end(), frame.dets[c][t].begin(), frame.dets[c][t].end());
      }
    }
  }

  void add(const LocalMap& pred, const LocalMap& gt) { add(evaluate_frame(pred, gt)); }

  EvalResult result() const {
    EvalResult result;
    result.thresholds = cfg_.thresholds;
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t t = 0; t < cfg_.thresholds.size(); ++t) {
        result.ap[c].push_back(average_precision(dets_[c][t], num_gt_[c]));
      }
      result.class_ap[c] = detail::mean_of(result.ap[c]);
    }
    result.mean_ap = detail::mean_of(result.class_ap);
    return result;
  }

 private:
  EvalConfig cfg_;
  std::array<std::vector<std::vector<Detection>>, 3> dets_;
  std::array<std::size_t, 3> num_gt_{};
};

// Frames are paired by frame_id. `jobs` > 1 evaluates frames on worker
// threads; the reduction runs afterwards in frame order so the result does
// not depend on scheduling.
inline EvalResult evaluate(std::span<const LocalMap> preds, std::span<const LocalMap> gts,
                           const EvalConfig& cfg = {}, unsigned jobs = 1) {
  EvalAccumulator acc(cfg);
  std::map<std::string, std::size_t> pred_index;
  for (std::size_t i = 0; i < preds.size(); ++i) pred_index[preds[i].frame_id] = i;
  std::vector<std::string> missing;
  std::set<std::string> gt_ids;
  for (const LocalMap& g : gts) {
    gt_ids.insert(g.frame_id);
    if (!pred_index.count(g.frame_id)) missing.push_back("prediction for " + g.frame_id);
  }
  for (const LocalMap& p : preds) {
    if (!gt_ids.count(p.frame_id)) missing.push_back("ground truth for " + p.frame_id);
  }
  if (!missing.empty()) {
    std::string detail = "frame mismatch, missing:";
    for (const auto& m : missing) detail += " " + m + ";";
    fail(ErrorKind::kInvalidInput, detail);
  }

  std::vector<FrameEvalResult> frames(gts.size());
  parallel_for(gts.size(), jobs, [&](std::size_t i) {
    frames[i] = acc.evaluate_frame(preds[pred_index.at(gts[i].frame_id)], gts[i]);
  });
  for (const auto& f : frames) acc.add(f);
  return acc.result();
}

}  // namespace pivotmap
