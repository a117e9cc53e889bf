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
#include <string>
#include <string_view>
#include <vector>

#include "transplant/image.hpp"

namespace transplant {

// COCO run-length encoding: alternating background/foreground run lengths in
// column-major pixel order, starting with a (possibly empty) background run.
using RleCounts = std::vector<std::uint32_t>;

// Throws FormatError when the counts do not sum to height * width.
BinaryMask decode_uncompressed_rle(const RleCounts& counts, int height, int width);

// Throws FormatError for characters outside the alphabet, a stream ending
// mid-value, negative reconstructed counts, or a bad sum.
BinaryMask decode_compressed_rle(std::string_view encoded, int height, int width);

RleCounts encode_rle(const BinaryMask& mask);

// Compressed character form of the counts (bit-exact with pycocotools).
std::string compress_rle_counts(const RleCounts& counts);
RleCounts decompress_rle_counts(std::string_view encoded);

}  // namespace transplant
