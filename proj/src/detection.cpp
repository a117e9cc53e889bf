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

#include "transplant/detection.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>

#include "json.hpp"
#include "transplant/error.hpp"

namespace transplant {

using nlohmann::ordered_json;

void validate(const Detection& d) {
  if (!(d.box.x_min < d.box.x_max) || !(d.box.y_min < d.box.y_max)) {
    throw InvariantViolation("degenerate box " + to_string(d.box));
  }
  if (!(d.score >= 0.0 && d.score <= 1.0)) {
    throw InvariantViolation("score " + std::to_string(d.score) + " outside [0, 1]");
  }
}

bool stable_order_less(const Detection& a, const Detection& b) {
  if (a.score != b.score) return a.score > b.score;
  return std::tie(a.category.id, a.box.x_min, a.box.y_min, a.box.x_max, a.box.y_max) <
         std::tie(b.category.id, b.box.x_min, b.box.y_min, b.box.x_max, b.box.y_max);
}

void DetectionSet::normalize() {
  std::stable_sort(detections.begin(), detections.end(), stable_order_less);
}

DetectionSet threshold_filter(const DetectionSet& d, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw ConfigError("confidence threshold " + std::to_string(theta) + " outside [0, 1]");
  }
  DetectionSet out{d.case_id, d.detector_id, {}};
  std::copy_if(d.detections.begin(), d.detections.end(), std::back_inserter(out.detections),
               [theta](const Detection& det) { return det.score > theta; });
  return out;
}

std::string to_exchange_record(const DetectionSet& d) {
  ordered_json j;
  j["case_id"] = d.case_id;
  j["detector_id"] = d.detector_id;
  j["detections"] = ordered_json::array();
  for (const Detection& det : d.detections) {
    ordered_json e;
    e["box"] = {det.box.x_min, det.box.y_min, det.box.x_max, det.box.y_max};
    e["score"] = det.score;
    e["category_id"] = det.category.id;
    e["category_name"] = det.category.name;
    j["detections"].push_back(std::move(e));
  }
  return j.dump();
}

ParsedRecord parse_exchange_record(const std::string& line) {
  ParsedRecord out;
  try {
    const auto j = ordered_json::parse(line);
    out.set.case_id = j.at("case_id").get<std::string>();
    out.set.detector_id = j.at("detector_id").get<std::string>();
    const auto& dets = j.at("detections");
    if (!dets.is_array()) throw FormatError("detections is not an array");
    for (std::size_t i = 0; i < dets.size(); ++i) {
      const auto& e = dets[i];
      const auto box = e.at("box").get<std::vector<double>>();
      if (box.size() != 4) throw FormatError("box must have four numbers");
      Detection det;
      det.box = {box[0], box[1], box[2], box[3]};
      det.score = e.at("score").get<double>();
      det.category = {e.at("category_id").get<int>(), e.at("category_name").get<std::string>()};
      try {
        validate(det);
        out.set.detections.push_back(det);
      } catch (const InvariantViolation& v) {
        out.rejected.push_back(out.set.case_id + " detection " + std::to_string(i) + ": " +
                               v.what());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(e.what());
  }
  return out;
}

DetectionFile load_detections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read detections " + path.string());
  DetectionFile out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    ParsedRecord rec;
    try {
      rec = parse_exchange_record(line);
    } catch (const FormatError& e) {
      throw FormatError(where + "malformed record: " + e.what());
    }
    for (auto& r : rec.rejected) out.issues.push_back(where + r);
    const std::string id = rec.set.case_id;
    if (!out.sets.emplace(id, std::move(rec.set)).second) {
      throw FormatError(where + "duplicate case_id " + id);
    }
  }
  return out;
}

void write_detections(const std::filesystem::path& path, const std::vector<DetectionSet>& sets) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const DetectionSet& d : sets) out << to_exchange_record(d) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace transplant
