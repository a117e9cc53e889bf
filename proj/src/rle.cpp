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

#include "transplant/rle.hpp"

#include <cstdint>
#include <numeric>
#include <string>

#include "transplant/error.hpp"

namespace transplant {

namespace {

// Compressed counts use 6-bit characters offset by '0': five value bits
// (least significant group first) and a continuation bit (0x20). Counts from
// index 3 onward are stored as the difference to the count two places back.
constexpr char kAlphabetBase = 48;
constexpr int kContinuation = 0x20;
constexpr int kValueBits = 0x1f;
constexpr int kSignBit = 0x10;

void check_sum(const RleCounts& counts, int height, int width) {
  const std::uint64_t sum = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  const std::uint64_t expected = static_cast<std::uint64_t>(height) * width;
  if (sum != expected) {
    throw FormatError("RLE counts sum to " + std::to_string(sum) + ", expected " +
                      std::to_string(expected));
  }
}

}  // namespace

BinaryMask decode_uncompressed_rle(const RleCounts& counts, int height, int width) {
  check_sum(counts, height, width);
  BinaryMask mask(width, height);
  std::uint64_t pos = 0;
  bool foreground = false;
  for (const std::uint32_t run : counts) {
    if (foreground) {
      for (std::uint64_t p = pos; p < pos + run; ++p) {
        const int x = static_cast<int>(p / static_cast<std::uint64_t>(height));
        const int y = static_cast<int>(p % static_cast<std::uint64_t>(height));
        mask.set(x, y);
      }
    }
    pos += run;
    foreground = !foreground;
  }
  return mask;
}

RleCounts decompress_rle_counts(std::string_view encoded) {
  RleCounts counts;
  std::size_t k = 0;
  while (k < encoded.size()) {
    std::int64_t value = 0;
    int groups = 0;
    bool more = true;
    while (more) {
      if (k >= encoded.size()) {
        throw FormatError("compressed RLE ends inside a value at offset " + std::to_string(k));
      }
      const int c = static_cast<unsigned char>(encoded[k]) - kAlphabetBase;
      if (c < 0 || c > 63) {
        throw FormatError("invalid compressed RLE character at offset " + std::to_string(k));
      }
      if (groups >= 12) throw FormatError("compressed RLE value too long");
      value |= static_cast<std::int64_t>(c & kValueBits) << (5 * groups);
      more = (c & kContinuation) != 0;
      ++k;
      ++groups;
      if (!more && (c & kSignBit)) value |= -(std::int64_t{1} << (5 * groups));
    }
    if (counts.size() > 2) value += counts[counts.size() - 2];
    if (value < 0 || value > static_cast<std::int64_t>(UINT32_MAX)) {
      throw FormatError("compressed RLE yields out-of-range count " + std::to_string(value));
    }
    counts.push_back(static_cast<std::uint32_t>(value));
  }
  return counts;
}

BinaryMask decode_compressed_rle(std::string_view encoded, int height, int width) {
  return decode_uncompressed_rle(decompress_rle_counts(encoded), height, width);
}

RleCounts encode_rle(const BinaryMask& mask) {
  RleCounts counts;
  std::uint32_t run = 0;
  bool current = false;
  for (int x = 0; x < mask.width(); ++x) {
    for (int y = 0; y < mask.height(); ++y) {
      if (mask.at(x, y) != current) {
        counts.push_back(run);
        run = 0;
        current = !current;
      }
      ++run;
    }
  }
  counts.push_back(run);
  return counts;
}

std::string compress_rle_counts(const RleCounts& counts) {
  std::string out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::int64_t x = counts[i];
    if (i > 2) x -= counts[i - 2];
    bool more = true;
    while (more) {
      int c = static_cast<int>(x & kValueBits);
      x >>= 5;
      more = (c & kSignBit) ? x != -1 : x != 0;
      if (more) c |= kContinuation;
      out.push_back(static_cast<char>(c + kAlphabetBase));
    }
  }
  return out;
}

}  // namespace transplant
