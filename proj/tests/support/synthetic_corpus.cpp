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

#include "synthetic_corpus.hpp"

#include <fstream>
#include <random>

#include "json.hpp"
#include "transplant/detector.hpp"
#include "transplant/image.hpp"
#include "transplant/image_io.hpp"

namespace transplant::testing {

namespace fs = std::filesystem;

SyntheticCorpus write_corpus(const fs::path& dir, const std::vector<SyntheticImage>& images) {
  fs::create_directories(dir / "images");
  nlohmann::ordered_json doc;
  doc["images"] = nlohmann::ordered_json::array();
  doc["annotations"] = nlohmann::ordered_json::array();
  doc["categories"] = nlohmann::ordered_json::array();
  for (const PaletteColor& c : stub_palette()) {
    doc["categories"].push_back({{"id", c.category.id}, {"name", c.category.name}});
  }
  for (const SyntheticImage& im : images) {
    ImageBuffer buf(im.width, im.height, 255);
    for (const SyntheticRect& r : im.rects) {
      const PaletteColor& c = stub_palette().at(static_cast<std::size_t>(r.category_id - 1));
      for (int y = r.rect.y; y < r.rect.bottom(); ++y) {
        for (int x = r.rect.x; x < r.rect.right(); ++x) buf.set_pixel(x, y, c.r, c.g, c.b);
      }
      const double x0 = r.rect.x, y0 = r.rect.y, x1 = r.rect.right(), y1 = r.rect.bottom();
      doc["annotations"].push_back(
          {{"id", r.annotation_id},
           {"image_id", im.image_id},
           {"category_id", r.category_id},
           {"segmentation", {{x0, y0, x1, y0, x1, y1, x0, y1}}},
           {"area", static_cast<double>(r.rect.area())},
           {"bbox", {x0, y0, static_cast<double>(r.rect.width), static_cast<double>(r.rect.height)}},
           {"iscrowd", 0}});
    }
    const std::string name = "img_" + std::to_string(im.image_id) + ".png";
    write_png(dir / "images" / name, buf);
    doc["images"].push_back(
        {{"id", im.image_id}, {"file_name", name}, {"width", im.width}, {"height", im.height}});
  }
  const fs::path annotations = dir / "annotations.json";
  std::ofstream(annotations) << doc.dump(1);
  return {annotations, dir / "images", images};
}

std::vector<SyntheticImage> random_scenes(std::uint64_t seed, int count, int width, int height) {
  std::mt19937_64 rng(seed);
  const auto uniform = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  std::vector<SyntheticImage> out;
  int next_annotation = 1;
  for (int i = 0; i < count; ++i) {
    SyntheticImage im{i + 1, width, height, {}};
    const int wanted = uniform(2, 3);
    for (int attempt = 0; attempt < 200 && static_cast<int>(im.rects.size()) < wanted; ++attempt) {
      PixelRect r{0, 0, uniform(16, 40), uniform(16, 40)};
      r.x = uniform(0, width - r.width);
      r.y = uniform(0, height - r.height);
      // Keep a 2-pixel gap so rectangles never touch.
      const PixelRect grown{r.x - 2, r.y - 2, r.width + 4, r.height + 4};
      bool clash = false;
      for (const SyntheticRect& other : im.rects) {
        if (!intersect(grown, other.rect).empty()) clash = true;
      }
      if (clash) continue;
      const int category = uniform(1, static_cast<int>(stub_palette().size()));
      im.rects.push_back({next_annotation++, category, r});
    }
    out.push_back(std::move(im));
  }
  return out;
}

std::vector<SyntheticImage> hand_fixture_scenes() {
  return {
      {1, 60, 40, {{11, 1, {0, 0, 20, 20}}}},
      {2, 60, 40, {{21, 3, {5, 5, 10, 20}}}},
  };
}

fs::path fresh_temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("transplant_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace transplant::testing
