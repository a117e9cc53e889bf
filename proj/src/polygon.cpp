// Copyright 2026 The transplant-bench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "transplant/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "transplant/error.hpp"

namespace transplant {

Polygon polygon_from_flat(const std::vector<double>& xy) {
  if (xy.size() % 2 != 0) {
    throw InvariantViolation("polygon has an odd number of coordinates");
  }
  Polygon poly;
  poly.reserve(xy.size() / 2);
  for (std::size_t i = 0; i + 1 < xy.size(); i += 2) poly.push_back({xy[i], xy[i + 1]});
  return poly;
}

BinaryMask rasterize_polygons(const std::vector<Polygon>& polygons, int height, int width) {
  if (polygons.empty()) throw InvariantViolation("empty polygon list");
  BinaryMask mask(width, height);
  std::vector<double> crossings;
  for (const Polygon& raw : polygons) {
    if (raw.size() < 3) {
      throw InvariantViolation("polygon with " + std::to_string(raw.size()) + " vertices");
    }
    Polygon poly = raw;
    for (Point& p : poly) {
      p.x = std::clamp(p.x, 0.0, static_cast<double>(width));
      p.y = std::clamp(p.y, 0.0, static_cast<double>(height));
    }
    // Scanline even-odd fill sampled at pixel centres. An edge counts for a
    // scanline when the centre row lies in [y_lo, y_hi).
    for (int y = 0; y < height; ++y) {
      const double cy = y + 0.5;
      crossings.clear();
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % poly.size()];
        if ((a.y <= cy) == (b.y <= cy)) continue;
        crossings.push_back(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
      }
      std::sort(crossings.begin(), crossings.end());
      for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) {
        // Centres strictly inside the span [left, right).
        const int x0 = std::max(0, static_cast<int>(std::ceil(crossings[i] - 0.5)));
        const int x1 = std::min(width, static_cast<int>(std::ceil(crossings[i + 1] - 0.5)));
        for (int x = x0; x < x1; ++x) mask.set(x, y);
      }
    }
  }
  return mask;
}

}  // namespace transplant
