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

#include "transplant/nms.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "transplant/error.hpp"
#include "transplant/matching.hpp"

namespace transplant {

void NmsConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw ConfigError("NMS IoU threshold must lie in (0, 1)");
  }
}

std::vector<std::size_t> greedy_nms_indices(const std::vector<Detection>& detections,
                                            const NmsConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return stable_order_less(detections[a], detections[b]);
  });

  std::vector<std::size_t> kept;
  for (const std::size_t i : order) {
    const Detection& d = detections[i];
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      const Detection& winner = detections[k];
      if (cfg.class_aware && winner.category.id != d.category.id) return false;
      return iou(winner.box, d.box) > cfg.iou_threshold;
    });
    if (!suppressed) kept.push_back(i);
  }
  return kept;
}

std::vector<Detection> greedy_nms(const std::vector<Detection>& detections, const NmsConfig& cfg) {
  std::vector<Detection> out;
  for (const std::size_t i : greedy_nms_indices(detections, cfg)) out.push_back(detections[i]);
  return out;
}

ProbeResult chain_reaction_probe(const std::vector<Detection>& detections,
                                 std::size_t removed_index, const NmsConfig& cfg,
                                 const ProbeOptions& options) {
  if (removed_index >= detections.size()) {
    throw ConfigError("detection index " + std::to_string(removed_index) + " out of range (" +
                      std::to_string(detections.size()) + " detections)");
  }
  if (options.attenuate && !(*options.attenuate >= 0.0 && *options.attenuate <= 1.0)) {
    throw ConfigError("attenuation factor must lie in [0, 1]");
  }

  ProbeResult out;
  out.kept_before = greedy_nms_indices(detections, cfg);

  // Indices of `altered` map back to the input through `origin`.
  std::vector<Detection> altered;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (i == removed_index) {
      if (!options.attenuate) continue;
      Detection weaker = detections[i];
      weaker.score *= *options.attenuate;
      altered.push_back(weaker);
    } else {
      altered.push_back(detections[i]);
    }
    origin.push_back(i);
  }
  for (const std::size_t k : greedy_nms_indices(altered, cfg)) out.kept_after.push_back(origin[k]);

  std::sort(out.kept_before.begin(), out.kept_before.end());
  std::sort(out.kept_after.begin(), out.kept_after.end());
  std::set_difference(out.kept_after.begin(), out.kept_after.end(), out.kept_before.begin(),
                      out.kept_before.end(), std::back_inserter(out.newly_surfaced));
  std::set_difference(out.kept_before.begin(), out.kept_before.end(), out.kept_after.begin(),
                      out.kept_after.end(), std::back_inserter(out.newly_suppressed));
  return out;
}

}  // namespace transplant
