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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "transplant/compositing.hpp"
#include "transplant/nms.hpp"
#include "transplant/stats.hpp"
#include "transplant/sweep.hpp"

namespace transplant {

// Settings shared by the generate / run / score stages. Stages hand over
// through files in `out`: manifest.jsonl and images/ from generate,
// detections.jsonl from run, report/ from score.
struct RunConfig {
  std::filesystem::path annotations;
  std::filesystem::path images;
  std::filesystem::path out;
  std::optional<int> base_image;
  std::optional<int> source_image;
  std::optional<int> instance;
  bool duplicate = false;
  SweepConfig sweep;
  // stub | file:PATH | http:URL
  std::string detector = "stub";
  std::vector<double> taus = kDefaultTaus;
  int jobs = 1;
  std::size_t exemplar_limit = 10;
  // Defaults to out/detections.jsonl.
  std::optional<std::filesystem::path> detections;
};

std::filesystem::path manifest_path(const RunConfig& run);
std::filesystem::path detections_path(const RunConfig& run);
std::filesystem::path partial_detections_path(const RunConfig& run);
std::filesystem::path report_dir(const RunConfig& run);

struct GenerateSummary {
  int base_image_id = 0;
  int instance_id = 0;
  std::size_t cases = 0;  // translations + the null case
};

// Renders the sweep into out/images and writes out/manifest.jsonl.
GenerateSummary cmd_generate(const RunConfig& run, std::ostream& log);

struct RunSummary {
  std::size_t records = 0;
  std::size_t resumed = 0;
};

// Runs the selected detector on every manifest case. Completed records are
// appended to detections.partial.jsonl as they finish, so a failed run can
// be resumed; on success detections.jsonl is written in manifest order.
RunSummary cmd_run(const RunConfig& run, std::ostream& log);

struct ScoreSummary {
  AffectedTable table;
  std::size_t records = 0;
  std::size_t exemplars = 0;
};

// Scores every non-null case against its base image's null case and writes
// the report files to out/report. Prints the table to `out`.
ScoreSummary cmd_score(const RunConfig& run, std::ostream& out);

struct AblateOptions {
  int instance_id = 0;
  AblationVariant variant = AblationVariant::kOutsideZero;
  std::uint64_t seed = 0;
  std::filesystem::path output;
  // Overrides the instance's image file; must have the annotated size.
  std::optional<std::filesystem::path> image;
};

void cmd_ablate(const RunConfig& run, const AblateOptions& options);

struct NmsProbeOptions {
  std::filesystem::path detections;
  std::optional<std::string> case_id;
  std::size_t removed_index = 0;
  NmsConfig nms;
  ProbeOptions probe;
};

// Writes the probe result as one JSON object to `out`.
ProbeResult cmd_nms_probe(const NmsProbeOptions& options, std::ostream& out);

AblationVariant ablation_variant_from_string(const std::string& s);

}  // namespace transplant
