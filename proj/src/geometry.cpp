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

#include "transplant/geometry.hpp"

#include <cmath>
#include <cstdio>

namespace transplant {

PixelRect intersect(const PixelRect& a, const PixelRect& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return {x0, y0, 0, 0};
  return {x0, y0, x1 - x0, y1 - y0};
}

double intersection_area(const Box& a, const Box& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  if (w <= 0.0) return 0.0;
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (h <= 0.0) return 0.0;
  return w * h;
}

PixelRect round_outward(const Box& b) {
  const int x0 = static_cast<int>(std::floor(b.x_min));
  const int y0 = static_cast<int>(std::floor(b.y_min));
  const int x1 = static_cast<int>(std::ceil(b.x_max));
  const int y1 = static_cast<int>(std::ceil(b.y_max));
  return {x0, y0, x1 - x0, y1 - y0};
}

std::string to_string(const Box& b) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "[%g, %g, %g, %g]", b.x_min, b.y_min, b.x_max, b.y_max);
  return buf;
}

}  // namespace transplant
