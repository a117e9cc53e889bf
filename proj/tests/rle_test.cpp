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

#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "json.hpp"
#include "support/oracles.hpp"
#include "transplant/error.hpp"
#include "transplant/rle.hpp"

namespace transplant {
namespace {

BinaryMask random_mask(std::mt19937_64& rng, int h, int w) {
  BinaryMask m(w, h);
  // Runs of random length give realistic, compressible masks.
  bool on = rng() % 2;
  int left = 0;
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) {
      if (left-- <= 0) {
        on = !on;
        left = static_cast<int>(rng() % 40);
      }
      m.set(x, y, on);
    }
  }
  return m;
}

std::vector<std::uint8_t> row_major(const BinaryMask& m) {
  return {m.bits().begin(), m.bits().end()};
}

TEST(UncompressedRle, SingleBackgroundRun) {
  const BinaryMask m = decode_uncompressed_rle({6}, 2, 3);
  EXPECT_EQ(m.foreground_count(), 0u);
  EXPECT_EQ(m.width(), 3);
  EXPECT_EQ(m.height(), 2);
}

TEST(UncompressedRle, LeadingEmptyBackgroundRun) {
  const BinaryMask m = decode_uncompressed_rle({0, 6}, 2, 3);
  EXPECT_EQ(m.foreground_count(), 6u);
}

TEST(UncompressedRle, ColumnMajorOrder) {
  // h=3, w=2: column-major positions 2, 3, 4 are (row2,col0), (row0,col1), (row1,col1).
  const BinaryMask m = decode_uncompressed_rle({2, 3, 1}, 3, 2);
  EXPECT_EQ(m.foreground_count(), 3u);
  EXPECT_TRUE(m.at(0, 2));
  EXPECT_TRUE(m.at(1, 0));
  EXPECT_TRUE(m.at(1, 1));
  EXPECT_FALSE(m.at(0, 0));
  EXPECT_FALSE(m.at(0, 1));
  EXPECT_FALSE(m.at(1, 2));
}

TEST(UncompressedRle, RejectsBadSum) {
  EXPECT_THROW(decode_uncompressed_rle({2, 3}, 3, 2), FormatError);
  EXPECT_THROW(decode_uncompressed_rle({7}, 2, 3), FormatError);
}

TEST(UncompressedRle, AgreesWithNaiveDecoder) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int h = 1 + static_cast<int>(rng() % 30);
    const int w = 1 + static_cast<int>(rng() % 30);
    const RleCounts counts = encode_rle(random_mask(rng, h, w));
    EXPECT_EQ(row_major(decode_uncompressed_rle(counts, h, w)),
              testing::naive_rle_decode(counts, h, w));
  }
}

TEST(CompressedRle, AllBackground) {
  const std::string s = compress_rle_counts({6});
  EXPECT_EQ(decode_compressed_rle(s, 2, 3), decode_uncompressed_rle({6}, 2, 3));
}

TEST(CompressedRle, RoundTripRandomMasks) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int h = 1 + static_cast<int>(rng() % 64);
    const int w = 1 + static_cast<int>(rng() % 64);
    const BinaryMask mask = random_mask(rng, h, w);
    const std::string s = compress_rle_counts(encode_rle(mask));
    const BinaryMask back = decode_compressed_rle(s, h, w);
    ASSERT_EQ(back, mask) << "trial " << trial;
    EXPECT_EQ(compress_rle_counts(encode_rle(back)), s);
    EXPECT_EQ(back.foreground_count() + back.background_count(),
              static_cast<std::size_t>(h) * w);
  }
}

TEST(CompressedRle, RejectsMalformedStreams) {
  EXPECT_THROW(decompress_rle_counts("\x7f"), FormatError);  // outside the alphabet
  EXPECT_THROW(decompress_rle_counts("P"), FormatError);     // continuation bit, then end
  EXPECT_THROW(decode_compressed_rle(compress_rle_counts({5}), 2, 3), FormatError);
  // Fourth count is a delta that drives the value negative.
  EXPECT_THROW(decompress_rle_counts(compress_rle_counts({1, 1, 1}) + "_"), FormatError);
}

TEST(CompressedRle, KnownReferenceStrings) {
  // Strings produced by pycocotools for these counts.
  EXPECT_EQ(compress_rle_counts({6}), "6");
  EXPECT_EQ(compress_rle_counts({0, 6}), "06");
  EXPECT_EQ(compress_rle_counts({2, 3, 1}), "231");
  EXPECT_EQ(compress_rle_counts({100, 20, 30, 5}), "T3d0n0A");
}

// The fixture's RLE strings and area fields come from pycocotools.
TEST(CompressedRle, BitExactWithFixtureStrings) {
  std::ifstream in(TRANSPLANT_TEST_DATA "/coco_fixture.json");
  ASSERT_TRUE(in);
  const auto doc = nlohmann::json::parse(in);
  int checked = 0;
  for (const auto& ann : doc["annotations"]) {
    const auto& seg = ann["segmentation"];
    if (!seg.is_object() || !seg["counts"].is_string()) continue;
    const std::string s = seg["counts"].get<std::string>();
    const int h = seg["size"][0];
    const int w = seg["size"][1];
    const BinaryMask m = decode_compressed_rle(s, h, w);
    EXPECT_EQ(compress_rle_counts(encode_rle(m)), s);
    EXPECT_EQ(static_cast<double>(m.foreground_count()), ann["area"].get<double>());
    ++checked;
  }
  EXPECT_GE(checked, 3);
}

}  // namespace
}  // namespace transplant
