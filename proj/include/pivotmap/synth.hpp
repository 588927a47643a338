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

// Synthetic map elements and the evenly-spaced vs. pivot representation
// comparison.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pivotmap/eval.hpp"
#include "pivotmap/parallel.hpp"
#include "pivotmap/simplify.hpp"

namespace pivotmap {

enum class ShapeKind { kStraight, kLCorner, kUShape, kZigzag, kArc, kRectangle };

inline constexpr std::array<ShapeKind, 6> kAllShapes = {
    ShapeKind::kStraight, ShapeKind::kLCorner, ShapeKind::kUShape,
    ShapeKind::kZigzag,   ShapeKind::kArc,     ShapeKind::kRectangle};

inline constexpr std::array<ShapeKind, 4> kCornerShapes = {
    ShapeKind::kLCorner, ShapeKind::kUShape, ShapeKind::kZigzag, ShapeKind::kRectangle};

inline std::string_view to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::kStraight: return "straight";
    case ShapeKind::kLCorner: return "l_corner";
    case ShapeKind::kUShape: return "u_shape";
    case ShapeKind::kZigzag: return "zigzag";
    case ShapeKind::kArc: return "arc";
    case ShapeKind::kRectangle: return "rectangle";
  }
  return "straight";
}

inline std::optional<ShapeKind> parse_shape_kind(std::string_view name) {
  for (ShapeKind k : kAllShapes) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

// Uniform doubles built directly from mt19937_64 output bits, whose sequence
// is fixed by the standard, so generated shapes match across toolchains.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 gen_;
};

inline constexpr std::size_t kDenseVertices = 60;

namespace detail {

inline std::vector<Point2> densify(std::span<const Point2> pivots, bool closed,
                                   std::size_t target_vertices) {
  const double spacing = arc_length(pivots, closed) / static_cast<double>(target_vertices);
  std::vector<Point2> out;
  const std::size_t segs = segment_count(pivots.size(), closed);
  for (std::size_t i = 0; i < segs; ++i) {
    const Point2 a = pivots[i];
    const Point2 b = pivots[(i + 1) % pivots.size()];
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(distance(a, b) / spacing)));
    for (std::size_t k = 0; k < pieces; ++k) {
      out.push_back(lerp(a, b, static_cast<double>(k) / static_cast<double>(pieces)));
    }
  }
  if (!closed) out.push_back(pivots.back());
  return out;
}

inline std::vector<Point2> rotate(std::vector<Point2> pts, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  for (Point2& p : pts) p = {c * p.x - s * p.y, s * p.x + c * p.y};
  return pts;
}

// Shape pivots in a local frame before rotation and placement.
inline std::vector<Point2> shape_pivots(ShapeKind kind, SeededRng& rng) {
  switch (kind) {
    case ShapeKind::kStraight: {
      const double len = rng.uniform(10.0, 25.0);
      return {{0.0, 0.0}, {len, 0.0}};
    }
    case ShapeKind::kLCorner: {
      // Unequal legs so that an even resampling never lands on the corner.
      const double a = rng.uniform(5.0, 10.0);
      const double b = a * rng.uniform(1.3, 1.8);
      const double turn = rng.uniform(60.0, 120.0) * std::numbers::pi / 180.0;
      return {{0.0, 0.0}, {a, 0.0}, {a - b * std::cos(turn), b * std::sin(turn)}};
    }
    case ShapeKind::kUShape: {
      const double w = rng.uniform(4.0, 8.0);
      const double h1 = rng.uniform(5.0, 9.0);
      const double h2 = h1 + rng.uniform(1.5, 4.0);
      return {{0.0, h1}, {0.0, 0.0}, {w, 0.0}, {w, h2}};
    }
    case ShapeKind::kZigzag: {
      const double step = rng.uniform(2.5, 4.0);
      const double amp = rng.uniform(1.0, 2.5);
      std::vector<Point2> pts;
      for (int k = 0; k < 6; ++k) {
        const double sign = (k % 2 == 0) ? -1.0 : 1.0;
        pts.push_back({k * step + rng.uniform(-0.3, 0.3), sign * amp + rng.uniform(-0.3, 0.3)});
      }
      return pts;
    }
    case ShapeKind::kArc: {
      const double radius = rng.uniform(8.0, 20.0);
      const double sweep = rng.uniform(60.0, 150.0) * std::numbers::pi / 180.0;
      const double arc_len = std::min(radius * sweep, 25.0);
      const double span = arc_len / radius;
      std::vector<Point2> pts;
      for (std::size_t k = 0; k < kDenseVertices; ++k) {
        const double t = span * static_cast<double>(k) / static_cast<double>(kDenseVertices - 1);
        pts.push_back({radius * std::sin(t), radius * (1.0 - std::cos(t))});
      }
      return pts;
    }
    case ShapeKind::kRectangle: {
      const double w = rng.uniform(3.0, 8.0);
      const double h = rng.uniform(4.0, 10.0);
      return {{0.0, 0.0}, {w, 0.0}, {w, h}, {0.0, h}};
    }
  }
  return {};
}

inline ElementClass shape_class(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kStraight:
    case ShapeKind::kZigzag: return ElementClass::kDivider;
    case ShapeKind::kRectangle: return ElementClass::kPedCrossing;
    default: return ElementClass::kBoundary;
  }
}

}  // namespace detail

// Deterministic densely sampled element for (kind, seed), placed inside the
// range with a 0.5 m margin.
inline MapElement gen_element(ShapeKind kind, std::uint64_t seed, const BevRange& range = {}) {
  SeededRng rng(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(kind) + 1);
  const bool closed = kind == ShapeKind::kRectangle;
  std::vector<Point2> pivots = detail::shape_pivots(kind, rng);
  pivots = detail::rotate(std::move(pivots), rng.uniform(0.0, 2.0 * std::numbers::pi));

  std::vector<Point2> pts = kind == ShapeKind::kArc
                                ? pivots
                                : detail::densify(pivots, closed, kDenseVertices);
  double lo_x = pts[0].x, hi_x = pts[0].x, lo_y = pts[0].y, hi_y = pts[0].y;
  for (const Point2& p : pts) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  constexpr double kMargin = 0.5;
  const auto place = [&](double lo, double hi, double r_min, double r_max) {
    const double slack = (r_max - r_min - 2.0 * kMargin) - (hi - lo);
    if (slack <= 0.0) return r_min + 0.5 * (r_max - r_min) - 0.5 * (lo + hi);
    return r_min + kMargin + rng.uniform(0.0, slack) - lo;
  };
  const Point2 offset{place(lo_x, hi_x, range.x_min, range.x_max),
                      place(lo_y, hi_y, range.y_min, range.y_max)};
  for (Point2& p : pts) p = p + offset;
  return MapElement{detail::shape_class(kind), Polyline{std::move(pts), closed}, std::nullopt};
}

// Cycles through the corner-heavy kinds.
inline std::vector<MapElement> corner_corpus(std::size_t count, std::uint64_t seed,
                                             const BevRange& range = {}) {
  std::vector<MapElement> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(gen_element(kCornerShapes[i % kCornerShapes.size()], seed + i, range));
  }
  return out;
}

// K points equally spaced by arc length. Open lines keep both endpoints;
// closed lines are spaced uniformly around the perimeter.
inline Polyline even_resample(const Polyline& line, std::size_t k) {
  require(k >= 2, ErrorKind::kInvalidInput, "even_resample: K must be >= 2");
  const ArcWalker walker(line.points, line.closed);
  const double length = walker.length();
  Polyline out;
  out.closed = line.closed;
  const double denom = static_cast<double>(line.closed ? k : k - 1);
  for (std::size_t i = 0; i < k; ++i) {
    const double s = (!line.closed && i + 1 == k) ? length : length * static_cast<double>(i) / denom;
    out.points.push_back(walker.at(s));
  }
  return out;
}

struct CompactnessRow {
  std::size_t index = 0;
  double chamfer_even = 0.0;   // m
  double chamfer_pivot = 0.0;  // m
};

struct CompactnessReport {
  std::size_t k = 0;
  std::vector<CompactnessRow> rows;
  std::vector<std::string> notes;  // skipped elements
  double mean_even = 0.0;
  double mean_pivot = 0.0;
};

inline CompactnessRow compare_representations(const Polyline& dense, std::size_t k,
                                              double step = 0.1) {
  CompactnessRow row;
  row.chamfer_even = chamfer_distance(dense, even_resample(dense, k), step);
  row.chamfer_pivot = chamfer_distance(dense, vw_top_k(dense, k), step);
  return row;
}

inline CompactnessReport compactness_experiment(std::span<const MapElement> corpus, std::size_t k,
                                                double step = 0.1, unsigned jobs = 1) {
  require(!corpus.empty(), ErrorKind::kInvalidInput, "compactness: empty corpus");
  require(k >= 2, ErrorKind::kInvalidInput, "compactness: K must be >= 2");
  CompactnessReport report;
  report.k = k;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].line.size() < k) {
      report.notes.push_back("element " + std::to_string(i) + " skipped: fewer than K vertices");
      continue;
    }
    if (corpus[i].line.closed && k < 3) {
      report.notes.push_back("element " + std::to_string(i) + " skipped: closed line needs K >= 3");
      continue;
    }
    kept.push_back(i);
  }
  report.rows.resize(kept.size());
  parallel_for(kept.size(), jobs, [&](std::size_t j) {
    report.rows[j] = compare_representations(corpus[kept[j]].line, k, step);
    report.rows[j].index = kept[j];
  });
  for (const auto& r : report.rows) {
    report.mean_even += r.chamfer_even;
    report.mean_pivot += r.chamfer_pivot;
  }
  if (!report.rows.empty()) {
    report.mean_even /= static_cast<double>(report.rows.size());
    report.mean_pivot /= static_cast<double>(report.rows.size());
  }
  return report;
}

}  // namespace pivotmap
