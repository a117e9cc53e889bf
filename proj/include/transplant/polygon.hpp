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

#pragma once

#include <vector>

#include "transplant/image.hpp"

namespace transplant {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Polygon = std::vector<Point>;

// Builds a polygon from COCO's flat [x0, y0, x1, y1, ...] layout.
Polygon polygon_from_flat(const std::vector<double>& xy);

// Union of the polygons, each filled with the even-odd rule. A pixel is
// foreground when its center (x + 0.5, y + 0.5) lies inside. Vertices are
// clamped to the image rectangle. Throws InvariantViolation for an empty list
// or a polygon with fewer than three vertices.
BinaryMask rasterize_polygons(const std::vector<Polygon>& polygons, int height, int width);

}  // namespace transplant
