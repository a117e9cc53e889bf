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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "transplant/geometry.hpp"
#include "transplant/image.hpp"
#include "transplant/image_io.hpp"

namespace transplant {

enum class MaskEncoding { kPolygon, kUncompressedRle, kCompressedRle };

const char* to_string(MaskEncoding e);

struct Instance {
  int instance_id = 0;
  int image_id = 0;
  int category_id = 0;
  std::string category_name;
  // COCO (x, y, w, h), top-left origin.
  double bbox_x = 0.0;
  double bbox_y = 0.0;
  double bbox_w = 0.0;
  double bbox_h = 0.0;
  double area = 0.0;
  bool is_crowd = false;
  MaskEncoding encoding = MaskEncoding::kPolygon;
  BinaryMask mask;

  Box box() const { return Box::from_xywh(bbox_x, bbox_y, bbox_w, bbox_h); }
  // Bounding box rounded outward to whole pixels.
  PixelRect pixel_box() const { return round_outward(box()); }
};

struct ImageRecord {
  int image_id = 0;
  std::filesystem::path path;
  ImageDimensions dimensions;
  bool file_present = false;
};

enum class LoadIssueKind {
  kMissingImageFile,
  kImageDimensionMismatch,
  kUnknownImage,
  kUnknownCategory,
  kUnknownEncoding,
  kMalformedSegmentation,
  kInvariantViolation,
};

const char* to_string(LoadIssueKind k);

struct LoadIssue {
  LoadIssueKind kind;
  // Image id for image-level issues, annotation id otherwise.
  long long id = 0;
  std::string message;
};

// Checks the Instance invariants against its image dimensions. Returns a
// description of the first violated invariant, or nullopt when valid.
std::optional<std::string> check_instance(const Instance& inst, const ImageDimensions& dims);

// Immutable after loading; concurrent readers need no locking.
class DatasetIndex {
 public:
  const std::map<int, ImageRecord>& images() const { return images_; }
  const std::map<int, Instance>& instances() const { return instances_; }
  const std::map<int, std::string>& categories() const { return categories_; }
  const std::vector<LoadIssue>& issues() const { return issues_; }

  const ImageRecord& image(int image_id) const;
  const Instance& instance(int instance_id) const;
  // Instance ids on an image in ascending order (empty for unknown ids).
  const std::vector<int>& instances_on(int image_id) const;

  ImageBuffer load_pixels(int image_id) const;

 private:
  friend DatasetIndex load_dataset(const std::filesystem::path&, const std::filesystem::path&);
  friend DatasetIndex parse_dataset(const std::string&, const std::filesystem::path&, bool);

  std::map<int, ImageRecord> images_;
  std::map<int, Instance> instances_;
  std::map<int, std::vector<int>> by_image_;
  std::map<int, std::string> categories_;
  std::vector<LoadIssue> issues_;
};

// Loads a COCO "instances" document. Unreadable or structurally invalid
// documents throw; per-instance problems and missing image files are recorded
// in issues() and loading continues. Rejected instances are not indexed.
DatasetIndex load_dataset(const std::filesystem::path& annotations_path,
                          const std::filesystem::path& images_root);

// Same as load_dataset over an in-memory document. With check_files false no
// image file is touched and every image is marked absent without an issue.
DatasetIndex parse_dataset(const std::string& document, const std::filesystem::path& images_root,
                           bool check_files = true);

}  // namespace transplant
