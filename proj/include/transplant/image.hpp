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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "transplant/geometry.hpp"

namespace transplant {

// Packed 8-bit RGB raster, row-major.
class ImageBuffer {
 public:
  static constexpr int kChannels = 3;

  ImageBuffer() = default;
  // Filled with `fill` in every sample. Throws InvariantViolation for non-positive sizes.
  ImageBuffer(int width, int height, std::uint8_t fill = 0);
  ImageBuffer(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  PixelRect bounds() const { return {0, 0, width_, height_}; }

  std::uint8_t* pixel(int x, int y) { return &pixels_[offset(x, y)]; }
  const std::uint8_t* pixel(int x, int y) const { return &pixels_[offset(x, y)]; }
  void set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  bool same_pixel(int x, int y, const ImageBuffer& other, int ox, int oy) const;

  std::span<const std::uint8_t> samples() const { return pixels_; }
  std::span<std::uint8_t> samples() { return pixels_; }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * kChannels;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// One byte per pixel (0 or 1), row-major.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool on = true) { bits_[index(x, y)] = on ? 1 : 0; }

  std::size_t foreground_count() const;
  std::size_t background_count() const { return bits_.size() - foreground_count(); }
  std::size_t size() const { return bits_.size(); }

  // Sub-mask of `rect`; pixels of `rect` outside this mask read as background.
  BinaryMask crop(const PixelRect& rect) const;

  std::span<const std::uint8_t> bits() const { return bits_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace transplant
