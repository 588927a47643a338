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

// Visvalingam-Whyatt simplification used to derive ground-truth pivot
// sequences from densely sampled map elements.
//
// Each interior vertex is ranked by the area of the triangle it forms with
// its current neighbours. The smallest one is removed (ties go to the lowest
// original index), the two neighbours are re-ranked, and the loop repeats.
// Because the removal order does not depend on the stopping rule, a larger
// threshold can only remove more vertices.

#pragma once

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "pivotmap/map_model.hpp"

namespace pivotmap {

struct SimplifyConfig {
  double area_threshold = 0.01;    // m^2
  double tolerance_epsilon = 0.1;  // m
};

inline void validate(const SimplifyConfig& cfg) {
  require(cfg.area_threshold > 0.0 && cfg.tolerance_epsilon > 0.0,
          ErrorKind::kInvalidInput,
          "simplify config: area_threshold and tolerance_epsilon must be > 0");
}

namespace detail {

class VwState {
 public:
  explicit VwState(const Polyline& line)
      : pts_(line.points), closed_(line.closed), alive_(line.points.size(), true) {
    const std::size_t n = pts_.size();
    prev_.resize(n);
    next_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      prev_[i] = (i + n - 1) % n;
      next_[i] = (i + 1) % n;
    }
    remaining_ = n;
    key_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_interior(i)) continue;
      key_[i] = area(i);
      queue_.insert({key_[i], i});
    }
  }

  std::size_t remaining() const { return remaining_; }
  bool empty() const { return queue_.empty(); }
  double smallest_area() const { return queue_.begin()->first; }

  void remove_smallest() {
    const std::size_t i = queue_.begin()->second;
    queue_.erase(queue_.begin());
    const std::size_t p = prev_[i];
    const std::size_t q = next_[i];
    alive_[i] = false;
    --remaining_;
    next_[p] = q;
    prev_[q] = p;
    refresh(p);
    refresh(q);
  }

  Polyline result() const {
    Polyline out;
    out.closed = closed_;
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (alive_[i]) out.points.push_back(pts_[i]);
    }
    return out;
  }

 private:
  bool is_interior(std::size_t i) const {
    if (closed_) return true;
    return i != 0 && i + 1 != pts_.size();
  }

  double area(std::size_t i) const {
    return triangle_area(pts_[prev_[i]], pts_[i], pts_[next_[i]]);
  }

  void refresh(std::size_t i) {
    if (!is_interior(i)) return;
    queue_.erase({key_[i], i});
    key_[i] = area(i);
    queue_.insert({key_[i], i});
  }

  const std::vector<Point2>& pts_;
  bool closed_;
  std::vector<bool> alive_;
  std::vector<std::size_t> prev_;
  std::vector<std::size_t> next_;
  std::vector<double> key_;
  std::size_t remaining_ = 0;
  std::set<std::pair<double, std::size_t>> queue_;
};

inline std::size_t min_vertices(const Polyline& line) { return line.closed ? 3 : 2; }

inline void require_simplifiable(const Polyline& line) {
  require(line.points.size() >= min_vertices(line), ErrorKind::kInvalidInput,
          line.closed ? "closed polyline needs >= 3 points"
                      : "polyline needs >= 2 points");
}

}  // namespace detail

inline Polyline vw_simplify(const Polyline& line, const SimplifyConfig& cfg = {}) {
  validate(cfg);
  detail::require_simplifiable(line);
  detail::VwState state(line);
  while (state.remaining() > detail::min_vertices(line) && !state.empty() &&
         state.smallest_area() < cfg.area_threshold) {
    state.remove_smallest();
  }
  return state.result();
}

// Budgeted variant: keeps removing in VW order until exactly `k` vertices
// remain (or the input already has no more than `k`).
inline Polyline vw_top_k(const Polyline& line, std::size_t k) {
  detail::require_simplifiable(line);
  require(k >= detail::min_vertices(line), ErrorKind::kInvalidInput,
          "vw_top_k: k below the minimum vertex count");
  detail::VwState state(line);
  while (state.remaining() > k && !state.empty()) state.remove_smallest();
  return state.result();
}

struct ToleranceCheck {
  bool within = false;
  double max_deviation = 0.0;  // m
};

inline bool is_subsequence(std::span<const Point2> sub, std::span<const Point2> seq) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < seq.size() && j < sub.size(); ++i) {
    if (seq[i] == sub[j]) ++j;
  }
  return j == sub.size();
}

// Largest distance from an original vertex to the simplified chain, and
// whether it stays strictly below epsilon.
inline ToleranceCheck check_tolerance(const Polyline& pivots, const Polyline& original,
                                      double epsilon) {
  require(!pivots.points.empty(), ErrorKind::kInvalidInput, "pivots are empty");
  require(is_subsequence(pivots.points, original.points), ErrorKind::kInvalidInput,
          "pivots are not a subsequence of the original vertices");
  ToleranceCheck check;
  for (const Point2& v : original.points) {
    check.max_deviation = std::max(
        check.max_deviation, point_polyline_distance(v, pivots.points, pivots.closed));
  }
  check.within = check.max_deviation < epsilon;
  return check;
}

}  // namespace pivotmap
