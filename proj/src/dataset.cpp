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

#include "transplant/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "transplant/error.hpp"
#include "transplant/polygon.hpp"
#include "transplant/rle.hpp"

namespace transplant {

using nlohmann::json;

namespace {

constexpr double kAreaTolerance = 0.02;
constexpr double kBboxSlack = 1.0;
// COCO bboxes are floats rounded to two decimals; allow that much overhang.
constexpr double kBoundsEpsilon = 0.01;

std::string fmt_issue(long long id, const std::string& what) {
  return "annotation " + std::to_string(id) + ": " + what;
}

struct DecodedSegmentation {
  BinaryMask mask;
  MaskEncoding encoding;
};

// Throws FormatError for malformed content; returns nullopt for an
// unrecognised encoding.
std::optional<DecodedSegmentation> decode_segmentation(const json& seg, const ImageDimensions& dims) {
  if (seg.is_array()) {
    std::vector<Polygon> polygons;
    for (const json& flat : seg) {
      if (!flat.is_array()) throw FormatError("polygon entry is not an array");
      polygons.push_back(polygon_from_flat(flat.get<std::vector<double>>()));
    }
    return DecodedSegmentation{rasterize_polygons(polygons, dims.height, dims.width),
                               MaskEncoding::kPolygon};
  }
  if (seg.is_object() && seg.contains("counts") && seg.contains("size")) {
    const auto size = seg.at("size").get<std::vector<int>>();
    if (size.size() != 2) throw FormatError("RLE size must be [h, w]");
    if (size[0] != dims.height || size[1] != dims.width) {
      throw FormatError("RLE size [" + std::to_string(size[0]) + ", " + std::to_string(size[1]) +
                        "] differs from image " + std::to_string(dims.height) + "x" +
                        std::to_string(dims.width));
    }
    const json& counts = seg.at("counts");
    if (counts.is_string()) {
      return DecodedSegmentation{
          decode_compressed_rle(counts.get<std::string>(), size[0], size[1]),
          MaskEncoding::kCompressedRle};
    }
    if (counts.is_array()) {
      return DecodedSegmentation{decode_uncompressed_rle(counts.get<RleCounts>(), size[0], size[1]),
                                 MaskEncoding::kUncompressedRle};
    }
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(MaskEncoding e) {
  switch (e) {
    case MaskEncoding::kPolygon: return "polygon";
    case MaskEncoding::kUncompressedRle: return "rle";
    case MaskEncoding::kCompressedRle: return "compressed-rle";
  }
  return "?";
}

const char* to_string(LoadIssueKind k) {
  switch (k) {
    case LoadIssueKind::kMissingImageFile: return "missing-image-file";
    case LoadIssueKind::kImageDimensionMismatch: return "image-dimension-mismatch";
    case LoadIssueKind::kUnknownImage: return "unknown-image";
    case LoadIssueKind::kUnknownCategory: return "unknown-category";
    case LoadIssueKind::kUnknownEncoding: return "unknown-encoding";
    case LoadIssueKind::kMalformedSegmentation: return "malformed-segmentation";
    case LoadIssueKind::kInvariantViolation: return "invariant-violation";
  }
  return "?";
}

std::optional<std::string> check_instance(const Instance& inst, const ImageDimensions& dims) {
  if (inst.mask.width() != dims.width || inst.mask.height() != dims.height) {
    return "mask size differs from image size";
  }
  if (!(inst.bbox_w > 0.0 && inst.bbox_h > 0.0)) return "bbox has non-positive extent";
  if (inst.bbox_x < -kBoundsEpsilon || inst.bbox_y < -kBoundsEpsilon ||
      inst.bbox_x + inst.bbox_w > dims.width + kBoundsEpsilon ||
      inst.bbox_y + inst.bbox_h > dims.height + kBoundsEpsilon) {
    return "bbox lies outside the image";
  }
  const std::size_t fg = inst.mask.foreground_count();
  if (fg == 0) return "mask is empty";
  const Box slack{inst.bbox_x - kBboxSlack, inst.bbox_y - kBboxSlack,
                  inst.bbox_x + inst.bbox_w + kBboxSlack, inst.bbox_y + inst.bbox_h + kBboxSlack};
  for (int y = 0; y < inst.mask.height(); ++y) {
    for (int x = 0; x < inst.mask.width(); ++x) {
      if (!inst.mask.at(x, y)) continue;
      if (x < slack.x_min || x + 1 > slack.x_max || y < slack.y_min || y + 1 > slack.y_max) {
        return "mask pixel (" + std::to_string(x) + ", " + std::to_string(y) +
               ") lies outside the bbox";
      }
    }
  }
  if (inst.area > 0.0) {
    const double rel = std::abs(static_cast<double>(fg) - inst.area) / inst.area;
    if (rel > kAreaTolerance) {
      std::ostringstream os;
      os << "mask has " << fg << " foreground pixels but area is " << inst.area;
      return os.str();
    }
  }
  return std::nullopt;
}

const ImageRecord& DatasetIndex::image(int image_id) const {
  const auto it = images_.find(image_id);
  if (it == images_.end()) throw ConfigError("unknown image id " + std::to_string(image_id));
  return it->second;
}

const Instance& DatasetIndex::instance(int instance_id) const {
  const auto it = instances_.find(instance_id);
  if (it == instances_.end()) {
    throw ConfigError("unknown or rejected instance id " + std::to_string(instance_id));
  }
  return it->second;
}

const std::vector<int>& DatasetIndex::instances_on(int image_id) const {
  static const std::vector<int> kNone;
  const auto it = by_image_.find(image_id);
  return it == by_image_.end() ? kNone : it->second;
}

ImageBuffer DatasetIndex::load_pixels(int image_id) const {
  const ImageRecord& rec = image(image_id);
  ImageBuffer img = read_image(rec.path);
  if (img.width() != rec.dimensions.width || img.height() != rec.dimensions.height) {
    throw InvariantViolation("image " + rec.path.string() + " is " + std::to_string(img.width()) +
                             "x" + std::to_string(img.height()) + ", annotations say " +
                             std::to_string(rec.dimensions.width) + "x" +
                             std::to_string(rec.dimensions.height));
  }
  return img;
}

DatasetIndex parse_dataset(const std::string& document, const std::filesystem::path& images_root,
                           bool check_files) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("annotation document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("images") || !doc.contains("annotations") ||
      !doc.contains("categories")) {
    throw FormatError("annotation document lacks images/annotations/categories arrays");
  }

  DatasetIndex index;
  try {
    for (const json& c : doc.at("categories")) {
      index.categories_[c.at("id").get<int>()] = c.at("name").get<std::string>();
    }
    for (const json& im : doc.at("images")) {
      ImageRecord rec;
      rec.image_id = im.at("id").get<int>();
      rec.path = images_root / im.at("file_name").get<std::string>();
      rec.dimensions = {im.at("width").get<int>(), im.at("height").get<int>()};
      if (rec.dimensions.width < 1 || rec.dimensions.height < 1) {
        throw FormatError("image " + std::to_string(rec.image_id) + " has non-positive size");
      }
      if (check_files) {
        rec.file_present = std::filesystem::is_regular_file(rec.path);
        if (!rec.file_present) {
          index.issues_.push_back({LoadIssueKind::kMissingImageFile, rec.image_id,
                                   "image file not found: " + rec.path.string()});
        } else {
          try {
            const ImageDimensions actual = read_image_dimensions(rec.path);
            if (actual != rec.dimensions) {
              index.issues_.push_back(
                  {LoadIssueKind::kImageDimensionMismatch, rec.image_id,
                   rec.path.string() + " is " + std::to_string(actual.width) + "x" +
                       std::to_string(actual.height)});
            }
          } catch (const Error& e) {
            index.issues_.push_back({LoadIssueKind::kMissingImageFile, rec.image_id, e.what()});
            rec.file_present = false;
          }
        }
      }
      index.images_[rec.image_id] = rec;
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed image or category entry: ") + e.what());
  }

  for (const json& ann : doc.at("annotations")) {
    Instance inst;
    try {
      inst.instance_id = ann.at("id").get<int>();
      inst.image_id = ann.at("image_id").get<int>();
      inst.category_id = ann.at("category_id").get<int>();
      const auto bbox = ann.at("bbox").get<std::vector<double>>();
      if (bbox.size() != 4) throw FormatError("bbox must have four numbers");
      inst.bbox_x = bbox[0];
      inst.bbox_y = bbox[1];
      inst.bbox_w = bbox[2];
      inst.bbox_h = bbox[3];
      inst.area = ann.value("area", 0.0);
      inst.is_crowd = ann.value("iscrowd", 0) != 0;
    } catch (const std::exception& e) {
      throw FormatError(std::string("malformed annotation entry: ") + e.what());
    }
    const long long id = inst.instance_id;
    if (index.instances_.contains(inst.instance_id)) {
      index.issues_.push_back(
          {LoadIssueKind::kInvariantViolation, id, fmt_issue(id, "duplicate annotation id")});
      continue;
    }

    const auto image_it = index.images_.find(inst.image_id);
    if (image_it == index.images_.end()) {
      index.issues_.push_back({LoadIssueKind::kUnknownImage, id,
                               fmt_issue(id, "unknown image id " + std::to_string(inst.image_id))});
      continue;
    }
    const auto cat_it = index.categories_.find(inst.category_id);
    if (cat_it == index.categories_.end()) {
      index.issues_.push_back(
          {LoadIssueKind::kUnknownCategory, id,
           fmt_issue(id, "unknown category id " + std::to_string(inst.category_id))});
      continue;
    }
    inst.category_name = cat_it->second;

    const ImageDimensions dims = image_it->second.dimensions;
    try {
      const auto decoded = decode_segmentation(ann.at("segmentation"), dims);
      if (!decoded) {
        index.issues_.push_back(
            {LoadIssueKind::kUnknownEncoding, id, fmt_issue(id, "unknown segmentation encoding")});
        continue;
      }
      inst.mask = decoded->mask;
      inst.encoding = decoded->encoding;
    } catch (const std::exception& e) {
      index.issues_.push_back({LoadIssueKind::kMalformedSegmentation, id, fmt_issue(id, e.what())});
      continue;
    }

    if (auto violation = check_instance(inst, dims)) {
      index.issues_.push_back({LoadIssueKind::kInvariantViolation, id, fmt_issue(id, *violation)});
      continue;
    }
    index.by_image_[inst.image_id].push_back(inst.instance_id);
    index.instances_.emplace(inst.instance_id, std::move(inst));
  }
  for (auto& [image_id, ids] : index.by_image_) std::sort(ids.begin(), ids.end());
  return index;
}

DatasetIndex load_dataset(const std::filesystem::path& annotations_path,
                          const std::filesystem::path& images_root) {
  std::ifstream in(annotations_path);
  if (!in) throw IoError("cannot read annotations " + annotations_path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_dataset(text, images_root, true);
}

}  // namespace transplant
