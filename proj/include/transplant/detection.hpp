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

#include <compare>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "transplant/geometry.hpp"

namespace transplant {

struct Category {
  int id = 0;
  std::string name;

  friend auto operator<=>(const Category&, const Category&) = default;
};

struct Detection {
  Box box;
  double score = 0.0;
  Category category;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Throws InvariantViolation for degenerate boxes or scores outside [0, 1].
void validate(const Detection& d);

// Descending score, then ascending (category id, x_min, y_min, x_max, y_max).
bool stable_order_less(const Detection& a, const Detection& b);

struct DetectionSet {
  std::string case_id;
  std::string detector_id;
  std::vector<Detection> detections;

  // Sorts detections into the stable order.
  void normalize();

  friend bool operator==(const DetectionSet&, const DetectionSet&) = default;
};

// Keeps detections with score strictly above theta; order is preserved.
// Throws ConfigError for theta outside [0, 1].
DetectionSet threshold_filter(const DetectionSet& d, double theta);

// One line of the detection-exchange format (no trailing newline).
std::string to_exchange_record(const DetectionSet& d);

struct ParsedRecord {
  DetectionSet set;
  // One entry per detection rejected for an invariant violation.
  std::vector<std::string> rejected;
};

// Throws FormatError on malformed JSON or missing fields.
ParsedRecord parse_exchange_record(const std::string& line);

struct DetectionFile {
  std::map<std::string, DetectionSet> sets;
  std::vector<std::string> issues;
};

// Reads a detection-exchange file. Malformed records and duplicate case ids
// throw FormatError naming the line; invalid detections are dropped and
// reported in issues.
DetectionFile load_detections(const std::filesystem::path& path);

void write_detections(const std::filesystem::path& path, const std::vector<DetectionSet>& sets);

}  // namespace transplant
