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

#include "transplant/compositing.hpp"

#include <random>
#include <string>

#include "transplant/error.hpp"

namespace transplant {

namespace {

void check_fits(const ImageBuffer& base, const Sprite& sprite, Translation t) {
  if (t.t_x < 0 || t.t_y < 0 || t.t_x + sprite.width() > base.width() ||
      t.t_y + sprite.height() > base.height()) {
    throw InvariantViolation("sprite " + std::to_string(sprite.width()) + "x" +
                             std::to_string(sprite.height()) + " at (" + std::to_string(t.t_x) +
                             ", " + std::to_string(t.t_y) + ") exceeds base " +
                             std::to_string(base.width()) + "x" + std::to_string(base.height()));
  }
  if (sprite.mask.width() != sprite.width() || sprite.mask.height() != sprite.height()) {
    throw InvariantViolation("sprite mask size differs from sprite pixels");
  }
}

}  // namespace

Sprite extract_sprite(const ImageBuffer& image, const Instance& instance) {
  const PixelRect rect = instance.pixel_box();
  if (rect.empty() || rect.x < 0 || rect.y < 0 || rect.right() > image.width() ||
      rect.bottom() > image.height()) {
    throw InvariantViolation("bbox of instance " + std::to_string(instance.instance_id) +
                             " lies outside its image");
  }
  if (instance.mask.width() != image.width() || instance.mask.height() != image.height()) {
    throw InvariantViolation("mask of instance " + std::to_string(instance.instance_id) +
                             " does not match image size");
  }
  Sprite sprite;
  sprite.pixels = ImageBuffer(rect.width, rect.height);
  for (int y = 0; y < rect.height; ++y) {
    for (int x = 0; x < rect.width; ++x) {
      const std::uint8_t* src = image.pixel(rect.x + x, rect.y + y);
      sprite.pixels.set_pixel(x, y, src[0], src[1], src[2]);
    }
  }
  sprite.mask = instance.mask.crop(rect);
  if (sprite.mask.foreground_count() == 0) {
    throw InvariantViolation("sprite of instance " + std::to_string(instance.instance_id) +
                             " has an empty mask");
  }
  sprite.source_instance_id = instance.instance_id;
  sprite.source_image_id = instance.image_id;
  return sprite;
}

ImageBuffer transplant(const ImageBuffer& base, const Sprite& sprite, Translation t) {
  check_fits(base, sprite, t);
  ImageBuffer out = base;
  for (int y = 0; y < sprite.height(); ++y) {
    for (int x = 0; x < sprite.width(); ++x) {
      if (!sprite.mask.at(x, y)) continue;
      const std::uint8_t* src = sprite.pixels.pixel(x, y);
      out.set_pixel(t.t_x + x, t.t_y + y, src[0], src[1], src[2]);
    }
  }
  return out;
}

ImageBuffer duplicate_within(const ImageBuffer& image, const Instance& instance, Translation t) {
  return transplant(image, extract_sprite(image, instance), t);
}

ImageBuffer ablate_outside_box(const ImageBuffer& image, const PixelRect& box, OutsideFill mode,
                               std::uint64_t seed) {
  if (intersect(box, image.bounds()).empty()) {
    throw InvariantViolation("ablation box does not intersect the image");
  }
  ImageBuffer out = image;
  std::mt19937_64 rng(seed);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (box.contains(x, y)) continue;
      std::uint8_t* p = out.pixel(x, y);
      for (int c = 0; c < ImageBuffer::kChannels; ++c) {
        // Low byte of a 64-bit Mersenne Twister draw: uniform on [0, 255].
        p[c] = mode == OutsideFill::kZero ? 0 : static_cast<std::uint8_t>(rng() & 0xff);
      }
    }
  }
  return out;
}

ImageBuffer ablate_non_object_inside_box(const ImageBuffer& image, const PixelRect& box,
                                         const BinaryMask& mask) {
  if (mask.width() != image.width() || mask.height() != image.height()) {
    throw InvariantViolation("mask " + std::to_string(mask.width()) + "x" +
                             std::to_string(mask.height()) + " does not match image " +
                             std::to_string(image.width()) + "x" + std::to_string(image.height()));
  }
  ImageBuffer out = image;
  const PixelRect inside = intersect(box, image.bounds());
  for (int y = inside.y; y < inside.bottom(); ++y) {
    for (int x = inside.x; x < inside.right(); ++x) {
      if (!mask.at(x, y)) out.set_pixel(x, y, 0, 0, 0);
    }
  }
  return out;
}

const char* to_string(AblationVariant v) {
  switch (v) {
    case AblationVariant::kOutsideZero: return "outside-zero";
    case AblationVariant::kMaskOnly: return "mask-only";
    case AblationVariant::kMaskPlusNoise: return "mask-plus-noise";
  }
  return "?";
}

ImageBuffer ablate(const ImageBuffer& image, const PixelRect& box, const BinaryMask& mask,
                   AblationVariant variant, std::uint64_t seed) {
  switch (variant) {
    case AblationVariant::kOutsideZero:
      return ablate_outside_box(image, box, OutsideFill::kZero, seed);
    case AblationVariant::kMaskOnly:
      return ablate_non_object_inside_box(
          ablate_outside_box(image, box, OutsideFill::kZero, seed), box, mask);
    case AblationVariant::kMaskPlusNoise:
      return ablate_outside_box(ablate_non_object_inside_box(image, box, mask), box,
                                OutsideFill::kNoise, seed);
  }
  throw ConfigError("unknown ablation variant");
}

}  // namespace transplant
