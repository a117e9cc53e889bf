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

#include "transplant/image.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "transplant/error.hpp"

namespace transplant {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw InvariantViolation("image dimensions must be positive, got " + std::to_string(width) +
                             "x" + std::to_string(height));
  }
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * height * kChannels, fill);
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * height * kChannels) {
    throw InvariantViolation("sample count " + std::to_string(pixels_.size()) +
                             " does not match " + std::to_string(width) + "x" +
                             std::to_string(height) + "x3");
  }
}

void ImageBuffer::set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  std::uint8_t* p = pixel(x, y);
  p[0] = r;
  p[1] = g;
  p[2] = b;
}

bool ImageBuffer::same_pixel(int x, int y, const ImageBuffer& other, int ox, int oy) const {
  return std::equal(pixel(x, y), pixel(x, y) + kChannels, other.pixel(ox, oy));
}

BinaryMask::BinaryMask(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw InvariantViolation("mask dimensions must be positive");
  }
  bits_.assign(static_cast<std::size_t>(width) * height, 0);
}

std::size_t BinaryMask::foreground_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::crop(const PixelRect& rect) const {
  BinaryMask out(rect.width, rect.height);
  const PixelRect inside = intersect(rect, {0, 0, width_, height_});
  for (int y = inside.y; y < inside.bottom(); ++y) {
    for (int x = inside.x; x < inside.right(); ++x) {
      out.set(x - rect.x, y - rect.y, at(x, y));
    }
  }
  return out;
}

}  // namespace transplant
