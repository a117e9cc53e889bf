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

#include <algorithm>
#include <compare>
#include <string>

namespace transplant {

// Integer pixel rectangle, top-left origin, half-open on the right/bottom.
struct PixelRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  int right() const { return x + width; }
  int bottom() const { return y + height; }
  long long area() const { return static_cast<long long>(width) * height; }
  bool contains(int px, int py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }
  bool empty() const { return width <= 0 || height <= 0; }

  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

PixelRect intersect(const PixelRect& a, const PixelRect& b);

// Corner-form box in continuous pixel coordinates.
struct Box {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return std::max(0.0, width()) * std::max(0.0, height()); }
  bool valid() const { return x_min < x_max && y_min < y_max; }

  static Box from_xywh(double x, double y, double w, double h) { return {x, y, x + w, y + h}; }
  static Box from_rect(const PixelRect& r) {
    return {static_cast<double>(r.x), static_cast<double>(r.y), static_cast<double>(r.right()),
            static_cast<double>(r.bottom())};
  }

  friend bool operator==(const Box&, const Box&) = default;
};

// Area of the intersection of two boxes; 0 when they do not overlap.
double intersection_area(const Box& a, const Box& b);

// Smallest integer rectangle containing the box (coordinates rounded outward).
PixelRect round_outward(const Box& b);

std::string to_string(const Box& b);

}  // namespace transplant
