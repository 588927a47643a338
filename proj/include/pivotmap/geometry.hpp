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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace pivotmap {

// Metric BEV coordinates: x lateral (positive right), y longitudinal
// (positive forward).
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline double l1_distance(Point2 a, Point2 b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}
inline bool is_finite(Point2 p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

// (1 - t) * a + t * b, written so t = 0 and t = 1 reproduce the endpoints.
inline Point2 lerp(Point2 a, Point2 b, double t) {
  return (1.0 - t) * a + t * b;
}

// Twice the signed area would be cross(b - a, c - a); this is the unsigned
// area of the triangle.
inline double triangle_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * std::abs(cross(b - a, c - a));
}

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, lerp(a, b, t));
}

inline std::size_t segment_count(std::size_t num_points, bool closed) {
  if (num_points < 2) return 0;
  return closed ? num_points : num_points - 1;
}

// Distance from p to the nearest point on the chain through `pts`. A closed
// chain includes the edge back to the first vertex.
inline double point_polyline_distance(Point2 p, std::span<const Point2> pts,
                                      bool closed) {
  if (pts.empty()) return std::numeric_limits<double>::infinity();
  if (pts.size() == 1) return distance(p, pts[0]);
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < segment_count(n, closed); ++i) {
    best = std::min(best, point_segment_distance(p, pts[i], pts[(i + 1) % n]));
  }
  return best;
}

inline double arc_length(std::span<const Point2> pts, bool closed) {
  double total = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < segment_count(n, closed); ++i) {
    total += distance(pts[i], pts[(i + 1) % n]);
  }
  return total;
}

// Point at arc position s along the chain (s clamped to [0, length]).
class ArcWalker {
 public:
  ArcWalker(std::span<const Point2> pts, bool closed) : pts_(pts), closed_(closed) {
    const std::size_t n = pts_.size();
    cumulative_.push_back(0.0);
    for (std::size_t i = 0; i < segment_count(n, closed_); ++i) {
      cumulative_.push_back(cumulative_.back() +
                            distance(pts_[i], pts_[(i + 1) % n]));
    }
  }

  double length() const { return cumulative_.back(); }

  Point2 at(double s) const {
    if (pts_.empty()) return {};
    if (cumulative_.size() == 1 || s <= 0.0) return pts_[0];
    if (s >= length()) return closed_ ? pts_[0] : pts_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    const std::size_t seg = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    const double seg_len = cumulative_[seg + 1] - cumulative_[seg];
    const Point2 a = pts_[seg];
    const Point2 b = pts_[(seg + 1) % pts_.size()];
    if (seg_len == 0.0) return a;
    return lerp(a, b, (s - cumulative_[seg]) / seg_len);
  }

 private:
  std::span<const Point2> pts_;
  bool closed_;
  std::vector<double> cumulative_;
};

}  // namespace pivotmap
