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

// Domain types for vectorized local maps.
//
// A map element is a classed polyline in metric bird's-eye-view coordinates.
// Closed polylines (polygons) carry a flag instead of a repeated endpoint so
// the point count of a polygon is exactly its number of distinct vertices.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pivotmap/error.hpp"
#include "pivotmap/geometry.hpp"

namespace pivotmap {

struct Polyline {
  std::vector<Point2> points;
  bool closed = false;

  std::size_t size() const { return points.size(); }
  std::span<const Point2> view() const { return points; }

  friend bool operator==(const Polyline&, const Polyline&) = default;
};

enum class ElementClass { kDivider = 0, kPedCrossing = 1, kBoundary = 2 };

inline constexpr std::array<ElementClass, 3> kAllClasses = {
    ElementClass::kDivider, ElementClass::kPedCrossing, ElementClass::kBoundary};

inline std::string_view to_string(ElementClass c) {
  switch (c) {
    case ElementClass::kDivider: return "divider";
    case ElementClass::kPedCrossing: return "ped_crossing";
    case ElementClass::kBoundary: return "boundary";
  }
  return "divider";
}

inline std::optional<ElementClass> parse_element_class(std::string_view name) {
  for (ElementClass c : kAllClasses) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

struct MapElement {
  ElementClass cls = ElementClass::kDivider;
  Polyline line;
  std::optional<double> score;  // predictions only

  friend bool operator==(const MapElement&, const MapElement&) = default;
};

struct BevRange {
  double x_min = -15.0;
  double x_max = 15.0;
  double y_min = -30.0;
  double y_max = 30.0;

  bool contains(Point2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }

  friend bool operator==(const BevRange&, const BevRange&) = default;
};

struct ClassLimits {
  int max_instances = 1;  // M
  int max_points = 2;     // N
};

// Per-class instance and point budgets, indexed by ElementClass.
struct ClassBudget {
  std::array<ClassLimits, 3> limits = {
      ClassLimits{20, 10}, ClassLimits{25, 2}, ClassLimits{15, 30}};

  const ClassLimits& operator[](ElementClass c) const {
    return limits[static_cast<std::size_t>(c)];
  }
  ClassLimits& operator[](ElementClass c) {
    return limits[static_cast<std::size_t>(c)];
  }
};

struct LocalMap {
  std::string frame_id;
  BevRange range;
  std::vector<MapElement> elements;

  friend bool operator==(const LocalMap&, const LocalMap&) = default;
};

// Throws kValidation with `where` prefixed to the message.
inline void validate_polyline(const Polyline& line, const std::string& where) {
  const auto bad = [&](const std::string& what) {
    fail(ErrorKind::kValidation, where + ": " + what);
  };
  if (line.points.size() < 2) bad("points: length >= 2 required");
  if (line.closed && line.points.size() < 3) {
    bad("points: closed polyline needs >= 3 points");
  }
  for (std::size_t i = 0; i < line.points.size(); ++i) {
    if (!is_finite(line.points[i])) {
      bad("points[" + std::to_string(i) + "]: non-finite coordinate");
    }
    if (i > 0 && line.points[i] == line.points[i - 1]) {
      bad("points[" + std::to_string(i) + "]: duplicates previous point");
    }
  }
  if (line.closed && line.points.front() == line.points.back()) {
    bad("points: closed polyline must not repeat its first point");
  }
}

inline void validate_range(const BevRange& r) {
  const bool finite = std::isfinite(r.x_min) && std::isfinite(r.x_max) &&
                      std::isfinite(r.y_min) && std::isfinite(r.y_max);
  if (!finite || !(r.x_min < r.x_max) || !(r.y_min < r.y_max)) {
    fail(ErrorKind::kValidation, "range: requires x_min < x_max and y_min < y_max");
  }
}

inline void validate_element(const MapElement& e, std::size_t index) {
  const std::string where = "element " + std::to_string(index);
  validate_polyline(e.line, where);
  if (e.score && !(*e.score >= 0.0 && *e.score <= 1.0)) {
    fail(ErrorKind::kValidation, where + ": score must lie in [0, 1]");
  }
}

inline void validate_local_map(const LocalMap& map) {
  validate_range(map.range);
  for (std::size_t i = 0; i < map.elements.size(); ++i) {
    validate_element(map.elements[i], i);
  }
}

inline void validate_budget(const ClassBudget& budget) {
  for (ElementClass c : kAllClasses) {
    if (budget[c].max_instances < 1 || budget[c].max_points < 2) {
      fail(ErrorKind::kValidation,
           "budget." + std::string(to_string(c)) + ": requires M >= 1 and N >= 2");
    }
  }
}

}  // namespace pivotmap
