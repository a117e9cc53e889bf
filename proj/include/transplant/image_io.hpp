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
#include <filesystem>
#include <span>
#include <vector>

#include "transplant/image.hpp"

namespace transplant {

struct ImageDimensions {
  int width = 0;
  int height = 0;
  friend bool operator==(const ImageDimensions&, const ImageDimensions&) = default;
};

// PNG or JPEG, chosen by file signature. Throws IoError / FormatError.
ImageBuffer read_image(const std::filesystem::path& path);

// Reads only the header.
ImageDimensions read_image_dimensions(const std::filesystem::path& path);

// Lossless 8-bit RGB PNG. Output bytes are a pure function of the pixels.
void write_png(const std::filesystem::path& path, const ImageBuffer& image);

std::vector<std::uint8_t> encode_png(const ImageBuffer& image);
ImageBuffer decode_png(std::span<const std::uint8_t> bytes);

}  // namespace transplant
