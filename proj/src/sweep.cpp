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

#include "transplant/sweep.hpp"

#include <fstream>
#include <random>
#include <set>

#include "json.hpp"
#include "transplant/error.hpp"

namespace transplant {

using nlohmann::ordered_json;

void SweepConfig::validate() const {
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (!(min_area_fraction > 0.0 && min_area_fraction < max_area_fraction &&
        max_area_fraction <= 1.0)) {
    throw ConfigError("area fractions must satisfy 0 < min < max <= 1");
  }
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
    throw ConfigError("confidence threshold must lie in [0, 1]");
  }
}

const char* to_string(CaseVariant v) {
  switch (v) {
    case CaseVariant::kNull: return "null";
    case CaseVariant::kTransplant: return "transplant";
    case CaseVariant::kDuplicate: return "duplicate";
    case CaseVariant::kAblateOutsideZero: return "ablate-outside-zero";
    case CaseVariant::kAblateMaskOnly: return "ablate-mask-only";
    case CaseVariant::kAblateMaskPlusNoise: return "ablate-mask-plus-noise";
  }
  return "?";
}

CaseVariant case_variant_from_string(const std::string& s) {
  for (CaseVariant v : {CaseVariant::kNull, CaseVariant::kTransplant, CaseVariant::kDuplicate,
                        CaseVariant::kAblateOutsideZero, CaseVariant::kAblateMaskOnly,
                        CaseVariant::kAblateMaskPlusNoise}) {
    if (s == to_string(v)) return v;
  }
  throw FormatError("unknown case variant '" + s + "'");
}

std::string make_case_id(int base_image_id, int source_image_id, int instance_id, Translation t,
                         CaseVariant variant) {
  return "b" + std::to_string(base_image_id) + "-s" + std::to_string(source_image_id) + "-i" +
         std::to_string(instance_id) + "-" + to_string(variant) + "-x" + std::to_string(t.t_x) +
         "-y" + std::to_string(t.t_y);
}

namespace {

std::vector<int> axis_positions(int limit, int stride) {
  std::vector<int> out;
  for (int v = 0; v <= limit; v += stride) out.push_back(v);
  if (out.back() != limit) out.push_back(limit);
  return out;
}

}  // namespace

std::vector<Translation> enumerate_translations(ImageDimensions base, ImageDimensions sprite,
                                                int stride) {
  if (stride < 1) throw ConfigError("stride must be >= 1");
  const int w0 = base.width - sprite.width;
  const int h0 = base.height - sprite.height;
  if (w0 < 0 || h0 < 0) {
    throw InvariantViolation("sprite " + std::to_string(sprite.width) + "x" +
                             std::to_string(sprite.height) + " is larger than base " +
                             std::to_string(base.width) + "x" + std::to_string(base.height));
  }
  const auto xs = axis_positions(w0, stride);
  const auto ys = axis_positions(h0, stride);
  std::vector<Translation> out;
  out.reserve(xs.size() * ys.size());
  for (int y : ys) {
    for (int x : xs) out.push_back({x, y});
  }
  return out;
}

Eligibility eligible_instance(const Instance& instance, ImageDimensions base,
                              const SweepConfig& cfg) {
  if (cfg.exclude_crowd && instance.is_crowd) return {false, "crowd"};
  const PixelRect rect = instance.pixel_box();
  if (rect.width > base.width || rect.height > base.height) return {false, "does-not-fit"};
  const double fraction =
      static_cast<double>(rect.area()) / (static_cast<double>(base.width) * base.height);
  if (fraction > cfg.max_area_fraction) return {false, "too-large"};
  if (fraction < cfg.min_area_fraction) return {false, "too-small"};
  return {true, ""};
}

ImageBuffer SweepPlan::render(const TestCase& c) const {
  switch (c.variant) {
    case CaseVariant::kNull: return base;
    case CaseVariant::kTransplant:
    case CaseVariant::kDuplicate: return transplant(base, sprite, c.translation);
    default: break;
  }
  throw ConfigError(std::string("sweep cannot render variant ") + to_string(c.variant));
}

namespace {

const Instance& pick_random_instance(const DatasetIndex& dataset, int base_image_id,
                                     const SourceSelection& selection, const SweepConfig& cfg,
                                     ImageDimensions base_dims) {
  std::vector<int> candidates;
  for (const auto& [image_id, rec] : dataset.images()) {
    if (selection.duplicate) {
      if (image_id != base_image_id) continue;
    } else {
      if (image_id == base_image_id) continue;
      if (selection.source_image_id && image_id != *selection.source_image_id) continue;
      if (!rec.file_present) continue;
    }
    if (!dataset.instances_on(image_id).empty()) candidates.push_back(image_id);
  }
  if (candidates.empty()) throw ConfigError("no candidate source image with instances");

  std::mt19937_64 rng(cfg.seed);
  for (int draw = 0; draw < kMaxRandomDraws; ++draw) {
    const int image_id = candidates[rng() % candidates.size()];
    const auto& ids = dataset.instances_on(image_id);
    const Instance& inst = dataset.instance(ids[rng() % ids.size()]);
    if (eligible_instance(inst, base_dims, cfg).eligible) return inst;
  }
  throw ConfigError("no eligible instance after " + std::to_string(kMaxRandomDraws) +
                    " random draws");
}

}  // namespace

SweepPlan plan_sweep(const DatasetIndex& dataset, int base_image_id,
                     const SourceSelection& selection, const SweepConfig& cfg) {
  cfg.validate();
  const ImageRecord& base_rec = dataset.image(base_image_id);
  const ImageDimensions base_dims = base_rec.dimensions;

  const Instance* inst = nullptr;
  if (selection.instance_id) {
    inst = &dataset.instance(*selection.instance_id);
    if (selection.source_image_id && inst->image_id != *selection.source_image_id) {
      throw ConfigError("instance " + std::to_string(inst->instance_id) +
                        " does not belong to source image " +
                        std::to_string(*selection.source_image_id));
    }
    if (selection.duplicate && inst->image_id != base_image_id) {
      throw ConfigError("duplicate mode needs an instance of the base image");
    }
    const Eligibility e = eligible_instance(*inst, base_dims, cfg);
    if (!e.eligible) {
      throw ConfigError("instance " + std::to_string(inst->instance_id) +
                        " is not eligible: " + e.reason);
    }
  } else {
    inst = &pick_random_instance(dataset, base_image_id, selection, cfg, base_dims);
  }

  const bool duplicate = inst->image_id == base_image_id;
  SweepPlan plan;
  plan.base = dataset.load_pixels(base_image_id);
  plan.sprite = extract_sprite(duplicate ? plan.base : dataset.load_pixels(inst->image_id), *inst);

  const CaseVariant variant = duplicate ? CaseVariant::kDuplicate : CaseVariant::kTransplant;
  const auto make = [&](Translation t, CaseVariant v) {
    TestCase c;
    c.base_image_id = base_image_id;
    c.source_image_id = inst->image_id;
    c.instance_id = inst->instance_id;
    c.translation = t;
    c.variant = v;
    c.sprite_width = plan.sprite.width();
    c.sprite_height = plan.sprite.height();
    c.case_id = make_case_id(c.base_image_id, c.source_image_id, c.instance_id, t, v);
    return c;
  };

  const auto translations =
      enumerate_translations(base_dims, {plan.sprite.width(), plan.sprite.height()}, cfg.stride);
  plan.cases.reserve(translations.size() + 1);
  plan.cases.push_back(make({0, 0}, CaseVariant::kNull));
  for (const Translation& t : translations) plan.cases.push_back(make(t, variant));
  return plan;
}

void generate_sweep(const SweepPlan& plan,
                    const std::function<void(const TestCase&, const ImageBuffer&)>& sink) {
  for (const TestCase& c : plan.cases) sink(c, plan.render(c));
}

std::string manifest_line(const ManifestEntry& e) {
  const TestCase& c = e.test_case;
  ordered_json j;
  j["case_id"] = c.case_id;
  j["base_image_id"] = c.base_image_id;
  j["source_image_id"] = c.source_image_id;
  j["instance_id"] = c.instance_id;
  j["variant"] = to_string(c.variant);
  j["t_x"] = c.translation.t_x;
  j["t_y"] = c.translation.t_y;
  j["sprite_width"] = c.sprite_width;
  j["sprite_height"] = c.sprite_height;
  j["path"] = e.path;
  return j.dump();
}

ManifestEntry parse_manifest_line(const std::string& line) {
  try {
    const auto j = ordered_json::parse(line);
    ManifestEntry e;
    TestCase& c = e.test_case;
    c.case_id = j.at("case_id").get<std::string>();
    c.base_image_id = j.at("base_image_id").get<int>();
    c.source_image_id = j.at("source_image_id").get<int>();
    c.instance_id = j.at("instance_id").get<int>();
    c.variant = case_variant_from_string(j.at("variant").get<std::string>());
    c.translation = {j.at("t_x").get<int>(), j.at("t_y").get<int>()};
    c.sprite_width = j.at("sprite_width").get<int>();
    c.sprite_height = j.at("sprite_height").get<int>();
    e.path = j.at("path").get<std::string>();
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("malformed manifest record: ") + ex.what());
  }
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const ManifestEntry& e : entries) out << manifest_line(e) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest " + path.string());
  std::vector<ManifestEntry> out;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(parse_manifest_line(line));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(out.back().test_case.case_id).second) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": duplicate case_id " +
                        out.back().test_case.case_id);
    }
  }
  return out;
}

}  // namespace transplant
