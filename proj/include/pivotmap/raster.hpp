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

// BEV grid rasterization and the mask losses built on it.
//
// Grid orientation: row 0 is the rear edge (y_min), column 0 the left edge
// (x_min). A cell is lit when its centre lies within thickness / 2 of the
// polyline.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pivotmap/dvs_loss.hpp"
#include "pivotmap/map_model.hpp"

namespace pivotmap {

inline constexpr double kDiceSmooth = 1.0;

struct GridDims {
  std::size_t rows = 64;  // longitudinal
  std::size_t cols = 32;  // lateral
};

class BevGrid {
 public:
  BevGrid() = default;
  BevGrid(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {
    require(rows >= 1 && cols >= 1, ErrorKind::kInvalidInput, "grid dimensions must be >= 1");
  }
  explicit BevGrid(GridDims d, double fill = 0.0) : BevGrid(d.rows, d.cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  friend bool operator==(const BevGrid&, const BevGrid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

inline double cell_diagonal(const BevRange& range, GridDims dims) {
  return std::hypot(range.width() / static_cast<double>(dims.cols),
                    range.height() / static_cast<double>(dims.rows));
}

inline Point2 cell_center(const BevRange& range, GridDims dims, std::size_t row, std::size_t col) {
  const double cw = range.width() / static_cast<double>(dims.cols);
  const double ch = range.height() / static_cast<double>(dims.rows);
  return {range.x_min + (static_cast<double>(col) + 0.5) * cw,
          range.y_min + (static_cast<double>(row) + 0.5) * ch};
}

// thickness <= 0 selects the default of one cell diagonal.
inline BevGrid rasterize(const Polyline& line, const BevRange& range, GridDims dims,
                         double thickness = 0.0) {
  require(dims.rows >= 1 && dims.cols >= 1, ErrorKind::kInvalidInput,
          "grid dimensions must be >= 1");
  if (thickness <= 0.0) thickness = cell_diagonal(range, dims);
  const double half = 0.5 * thickness;
  BevGrid grid(dims);
  for (std::size_t r = 0; r < dims.rows; ++r) {
    for (std::size_t c = 0; c < dims.cols; ++c) {
      const Point2 center = cell_center(range, dims, r, c);
      if (point_polyline_distance(center, line.points, line.closed) <= half) grid(r, c) = 1.0;
    }
  }
  return grid;
}

// Cellwise maximum.
inline BevGrid union_mask(std::span<const BevGrid> masks, GridDims dims) {
  BevGrid out(dims);
  for (const BevGrid& m : masks) {
    require(m.rows() == dims.rows && m.cols() == dims.cols, ErrorKind::kInvalidInput,
            "union mask: dimension mismatch");
    for (std::size_t i = 0; i < out.size(); ++i) {
      out.values()[i] = std::max(out.values()[i], m.values()[i]);
    }
  }
  return out;
}

namespace detail {
inline void require_same_dims(const BevGrid& a, const BevGrid& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::kInvalidInput,
          "mask dimension mismatch");
}
}  // namespace detail

inline double dice_loss(const BevGrid& pred, const BevGrid& gt) {
  detail::require_same_dims(pred, gt);
  double inter = 0.0, sum_p = 0.0, sum_g = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    inter += pred.values()[i] * gt.values()[i];
    sum_p += pred.values()[i];
    sum_g += gt.values()[i];
  }
  return 1.0 - (2.0 * inter + kDiceSmooth) / (sum_p + sum_g + kDiceSmooth);
}

inline double bce_mask_loss(const BevGrid& pred, const BevGrid& gt) {
  detail::require_same_dims(pred, gt);
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) sum += bce(pred.values()[i], gt.values()[i]);
  return sum / static_cast<double>(pred.size());
}

inline double mask_loss(const BevGrid& pred, const BevGrid& gt) {
  return bce_mask_loss(pred, gt) + dice_loss(pred, gt);
}

struct MaskLossWeights {
  double lambda1 = 5.0;
  double lambda2 = 3.0;
};

struct LineAwareLoss {
  double value = 0.0;
  bool empty = false;  // no instances; value is 0 by convention
};

struct RasterParams {
  BevRange range;
  GridDims dims;
  double thickness = 0.0;  // <= 0: one cell diagonal
};

// Mean over paired instances of BCE + dice against the rasterized ground
// truth. pred_masks[k] is paired with gt_lines[k].
inline LineAwareLoss line_aware_loss(std::span<const BevGrid> pred_masks,
                                     std::span<const Polyline> gt_lines,
                                     const RasterParams& params = {}) {
  require(pred_masks.size() == gt_lines.size(), ErrorKind::kInvalidInput,
          "line-aware loss: one predicted mask per ground-truth line required");
  LineAwareLoss out;
  if (pred_masks.empty()) {
    out.empty = true;
    return out;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < pred_masks.size(); ++k) {
    sum += mask_loss(pred_masks[k], rasterize(gt_lines[k], params.range, params.dims, params.thickness));
  }
  out.value = sum / static_cast<double>(pred_masks.size());
  return out;
}

// Same loss against the union of all ground-truth element masks.
inline double bev_loss(const BevGrid& pred_mask, std::span<const Polyline> gt_lines,
                       const RasterParams& params = {}) {
  std::vector<BevGrid> masks;
  for (const Polyline& l : gt_lines) {
    masks.push_back(rasterize(l, params.range, params.dims, params.thickness));
  }
  return mask_loss(pred_mask, union_mask(masks, params.dims));
}

inline double total_loss(const DvsReport& dvs, double line_aware, double bev,
                         const MaskLossWeights& w = {}) {
  require(std::isfinite(dvs.total) && std::isfinite(line_aware) && std::isfinite(bev),
          ErrorKind::kInvalidInput, "total loss: non-finite component");
  return dvs.total + w.lambda1 * line_aware + w.lambda2 * bev;
}

}  // namespace pivotmap
