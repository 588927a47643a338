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
#include <optional>
#include <utility>
#include <vector>

#include "pivotmap/map_model.hpp"

namespace pivotmap {

namespace detail {

// Liang-Barsky parametric clip of a -> b against the range rectangle.
inline std::optional<std::pair<double, double>> clip_segment(Point2 a, Point2 b,
                                                             const BevRange& r) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - r.x_min, r.x_max - a.x, a.y - r.y_min, r.y_max - a.y};
  double t0 = 0.0;
  double t1 = 1.0;
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return std::nullopt;
      continue;
    }
    const double t = q[k] / p[k];
    if (p[k] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

// Intersection points are snapped onto the rectangle so that rounding never
// leaves a clipped vertex a few ulps outside the range.
inline Point2 clip_point(Point2 a, Point2 b, double t, const BevRange& r) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  const Point2 p = lerp(a, b, t);
  return {std::clamp(p.x, r.x_min, r.x_max), std::clamp(p.y, r.y_min, r.y_max)};
}

inline std::vector<std::vector<Point2>> clip_chain(std::span<const Point2> pts,
                                                   const BevRange& r) {
  std::vector<std::vector<Point2>> pieces;
  std::vector<Point2> current;
  const auto flush = [&] {
    if (current.size() >= 2) pieces.push_back(std::move(current));
    current.clear();
  };
  const auto push = [&](Point2 p) {
    if (current.empty() || !(current.back() == p)) current.push_back(p);
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto clipped = clip_segment(pts[i], pts[i + 1], r);
    if (!clipped) {
      flush();
      continue;
    }
    const Point2 start = clip_point(pts[i], pts[i + 1], clipped->first, r);
    const Point2 end = clip_point(pts[i], pts[i + 1], clipped->second, r);
    if (current.empty() || !(current.back() == start)) {
      flush();
      current.push_back(start);
    }
    push(end);
    if (clipped->second < 1.0) flush();
  }
  flush();
  return pieces;
}

}  // namespace detail

// Clips one polyline to the range. Open pieces are returned in chain order.
// A closed polyline that lies entirely inside stays closed; one that crosses
// the boundary becomes open pieces of its perimeter.
inline std::vector<Polyline> clip_polyline(const Polyline& line, const BevRange& range) {
  std::vector<Polyline> out;
  const bool all_inside = std::all_of(line.points.begin(), line.points.end(),
                                      [&](Point2 p) { return range.contains(p); });
  if (all_inside) {
    if (line.points.size() >= 2) out.push_back(line);
    return out;
  }
  std::vector<Point2> chain = line.points;
  if (line.closed && !chain.empty()) chain.push_back(chain.front());
  auto pieces = detail::clip_chain(chain, range);
  // A perimeter walk that starts and ends inside at vertex 0 yields one piece
  // split in two; stitch them back together.
  if (line.closed && pieces.size() >= 2 && range.contains(line.points.front()) &&
      pieces.front().front() == line.points.front() &&
      pieces.back().back() == line.points.front()) {
    auto& last = pieces.back();
    last.insert(last.end(), pieces.front().begin() + 1, pieces.front().end());
    pieces.erase(pieces.begin());
  }
  for (auto& piece : pieces) out.push_back(Polyline{std::move(piece), false});
  return out;
}

inline LocalMap clip_to_range(const LocalMap& map) {
  LocalMap out;
  out.frame_id = map.frame_id;
  out.range = map.range;
  for (const MapElement& e : map.elements) {
    for (Polyline& piece : clip_polyline(e.line, map.range)) {
      out.elements.push_back(MapElement{e.cls, std::move(piece), e.score});
    }
  }
  return out;
}

}  // namespace pivotmap
