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

// Minimal SVG overlays for the compare and fit subcommands. Panels are laid
// out on a grid; each panel maps its own bounding box to a square viewport
// with +y pointing up.

#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pivotmap/geometry.hpp"

namespace pivotmap::svg {

struct Layer {
  std::vector<Point2> points;
  bool closed = false;
  std::string color;
  bool markers = false;
};

using Panel = std::vector<Layer>;

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

inline void write(std::ostream& os, std::span<const Panel> panels, int columns = 10,
                  double panel_px = 160.0) {
  const int cols = std::max(1, std::min<int>(columns, static_cast<int>(panels.size())));
  const int rows = static_cast<int>((panels.size() + cols - 1) / cols);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(cols * panel_px)
     << "\" height=\"" << fmt(std::max(rows, 1) * panel_px) << "\">\n";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const Layer& l : panels[k]) {
      for (const Point2& p : l.points) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
      }
    }
    if (lo_x > hi_x) continue;
    const double extent = std::max({hi_x - lo_x, hi_y - lo_y, 1e-6});
    const double pad = 8.0;
    const double scale = (panel_px - 2 * pad) / extent;
    const double ox = static_cast<double>(k % cols) * panel_px + pad;
    const double oy = static_cast<double>(k / cols) * panel_px + pad;
    const auto px = [&](Point2 p) {
      return fmt(ox + (p.x - lo_x) * scale) + "," + fmt(oy + (hi_y - p.y) * scale);
    };
    os << "<g>\n";
    for (const Layer& l : panels[k]) {
      os << (l.closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << l.color
         << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < l.points.size(); ++i) os << (i ? " " : "") << px(l.points[i]);
      os << "\"/>\n";
      if (!l.markers) continue;
      for (const Point2& p : l.points) {
        const auto xy = px(p);
        const auto comma = xy.find(',');
        os << "<circle r=\"2.5\" fill=\"" << l.color << "\" cx=\"" << xy.substr(0, comma)
           << "\" cy=\"" << xy.substr(comma + 1) << "\"/>\n";
      }
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
}

}  // namespace pivotmap::svg
