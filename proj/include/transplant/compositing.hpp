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

#include <cstdint>

#include "transplant/dataset.hpp"
#include "transplant/geometry.hpp"
#include "transplant/image.hpp"

namespace transplant {

// Bounding-box crop of an object together with its mask.
struct Sprite {
  ImageBuffer pixels;
  BinaryMask mask;
  int source_instance_id = 0;
  int source_image_id = 0;

  int width() const { return pixels.width(); }
  int height() const { return pixels.height(); }
};

struct Translation {
  int t_x = 0;
  int t_y = 0;
  friend bool operator==(const Translation&, const Translation&) = default;
};

// Throws InvariantViolation when the bbox leaves the image, the image size
// differs from the mask size, or the cropped mask is empty.
Sprite extract_sprite(const ImageBuffer& image, const Instance& instance);

// Copies the sprite's foreground pixels into a copy of `base` at `t`. Every
// other pixel is taken from base verbatim. Throws InvariantViolation when the
// sprite does not fit entirely inside base at `t`.
ImageBuffer transplant(const ImageBuffer& base, const Sprite& sprite, Translation t);

// transplant(image, extract_sprite(image, instance), t)
ImageBuffer duplicate_within(const ImageBuffer& image, const Instance& instance, Translation t);

enum class OutsideFill { kZero, kNoise };

// Pixels outside `box` become 0 (kZero) or independent uniform bytes drawn
// from a generator seeded with `seed` (kNoise). Pixels inside are untouched.
// Throws InvariantViolation when the box misses the image entirely.
ImageBuffer ablate_outside_box(const ImageBuffer& image, const PixelRect& box, OutsideFill mode,
                               std::uint64_t seed);

// Inside `box`, mask-background pixels become 0. Throws InvariantViolation on
// a mask/image size mismatch.
ImageBuffer ablate_non_object_inside_box(const ImageBuffer& image, const PixelRect& box,
                                         const BinaryMask& mask);

enum class AblationVariant { kOutsideZero, kMaskOnly, kMaskPlusNoise };

const char* to_string(AblationVariant v);

// Feature-interference variants:
//   outside-zero    = ablate_outside_box(zero)
//   mask-only       = outside-zero, then ablate_non_object_inside_box
//   mask-plus-noise = ablate_non_object_inside_box, then ablate_outside_box(noise)
ImageBuffer ablate(const ImageBuffer& image, const PixelRect& box, const BinaryMask& mask,
                   AblationVariant variant, std::uint64_t seed);

}  // namespace transplant
