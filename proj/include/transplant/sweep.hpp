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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "transplant/compositing.hpp"
#include "transplant/dataset.hpp"

namespace transplant {

struct SweepConfig {
  int stride = 10;
  double min_area_fraction = 0.01;
  double max_area_fraction = 0.30;
  bool exclude_crowd = true;
  std::uint64_t seed = 0;
  double confidence_threshold = 0.5;

  // Throws ConfigError.
  void validate() const;
};

enum class CaseVariant {
  kNull,
  kTransplant,
  kDuplicate,
  kAblateOutsideZero,
  kAblateMaskOnly,
  kAblateMaskPlusNoise,
};

const char* to_string(CaseVariant v);
CaseVariant case_variant_from_string(const std::string& s);

struct TestCase {
  std::string case_id;
  int base_image_id = 0;
  int source_image_id = 0;
  int instance_id = 0;
  Translation translation;
  CaseVariant variant = CaseVariant::kTransplant;
  // Placement rectangle size (the sprite crop); used as T's bounding box.
  int sprite_width = 0;
  int sprite_height = 0;

  PixelRect placement() const {
    return {translation.t_x, translation.t_y, sprite_width, sprite_height};
  }
};

// Deterministic id built from every other identifying field.
std::string make_case_id(int base_image_id, int source_image_id, int instance_id,
                         Translation t, CaseVariant variant);

// Row-major grid of multiples of `stride`, plus the far edge (base - sprite)
// on each axis when it is not itself a multiple. Throws InvariantViolation
// when the sprite is larger than the base, ConfigError for stride < 1.
std::vector<Translation> enumerate_translations(ImageDimensions base, ImageDimensions sprite,
                                                int stride);

struct Eligibility {
  bool eligible = false;
  // Empty when eligible; otherwise one of "crowd", "does-not-fit",
  // "too-large", "too-small".
  std::string reason;
};

// Area fraction = sprite crop area / base area; the band is inclusive.
Eligibility eligible_instance(const Instance& instance, ImageDimensions base,
                              const SweepConfig& cfg);

struct SourceSelection {
  // Explicit instance; when unset one is drawn at random with cfg.seed.
  std::optional<int> instance_id;
  // Restricts random draws to this source image.
  std::optional<int> source_image_id;
  // Copy within the base image instead of transplanting from another one.
  bool duplicate = false;
};

// Everything needed to render any case of one sweep. cases[0] is the null
// case (the unmodified base image).
struct SweepPlan {
  ImageBuffer base;
  Sprite sprite;
  std::vector<TestCase> cases;

  ImageBuffer render(const TestCase& c) const;
};

inline constexpr int kMaxRandomDraws = 1000;

// Throws ConfigError when the explicit instance is ineligible or no eligible
// instance is found within kMaxRandomDraws random draws.
SweepPlan plan_sweep(const DatasetIndex& dataset, int base_image_id,
                     const SourceSelection& selection, const SweepConfig& cfg);

// Streams every (case, image) of the plan in order.
void generate_sweep(const SweepPlan& plan,
                    const std::function<void(const TestCase&, const ImageBuffer&)>& sink);

// Line-delimited manifest, one record per case.
struct ManifestEntry {
  TestCase test_case;
  std::string path;
};

std::string manifest_line(const ManifestEntry& e);
ManifestEntry parse_manifest_line(const std::string& line);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

}  // namespace transplant
