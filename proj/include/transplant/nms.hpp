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
#include <optional>
#include <vector>

#include "transplant/detection.hpp"

namespace transplant {

struct NmsConfig {
  double iou_threshold = 0.5;
  bool class_aware = true;

  // Throws ConfigError unless the threshold lies in (0, 1).
  void validate() const;
};

// Greedy NMS: visit detections in stable order (descending score) and keep a
// detection unless its IoU with an already kept one exceeds the threshold
// (same category only when class_aware). Returns kept input indices in visit
// order.
std::vector<std::size_t> greedy_nms_indices(const std::vector<Detection>& detections,
                                            const NmsConfig& cfg);
std::vector<Detection> greedy_nms(const std::vector<Detection>& detections, const NmsConfig& cfg);

struct ProbeOptions {
  // When set, the probed detection's score is multiplied by this factor
  // instead of removing the detection.
  std::optional<double> attenuate;
};

struct ProbeResult {
  // All indices refer to the input list, sorted ascending.
  std::vector<std::size_t> kept_before;
  std::vector<std::size_t> kept_after;
  std::vector<std::size_t> newly_surfaced;
  std::vector<std::size_t> newly_suppressed;
};

// Runs NMS with and without detection `removed_index` and diffs the kept
// sets. The probed detection counts as newly suppressed when it was kept
// before and is gone after. Throws ConfigError for an out-of-range index.
ProbeResult chain_reaction_probe(const std::vector<Detection>& detections,
                                 std::size_t removed_index, const NmsConfig& cfg,
                                 const ProbeOptions& options = {});

}  // namespace transplant
