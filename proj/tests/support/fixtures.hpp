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

// Hand-built record sets shared by the unit tests and the acceptance binary.

#include <vector>

#include "transplant/detection.hpp"
#include "transplant/stats.hpp"

namespace transplant::testing {

SweepRecord make_sweep_record(const char* case_id, double s_constrained, double s_agnostic,
                              double max_coverage, std::vector<Category> new_classes = {});

// Six records with hand-assigned scores and coverages. Expected rows at the
// default taus, as affected counts over the row denominator:
//   Affected      2 3 3 4 5 / 6
//   Agnostic      1 1 3 4 5 / 6
//   Occ-20        1 2 2 2 3 / 4
//   No-Occ        0 1 1 1 1 / 2
std::vector<SweepRecord> six_record_fixture();

struct ExpectedRow {
  TableRow row;
  std::vector<int> hits;
  int denominator;
};
std::vector<ExpectedRow> six_record_expectations();

// A bear transplanted at successive places: new detections accumulate as
// kite, then knife, then cellphone, with repeats and no-change cases mixed in.
std::vector<SweepRecord> kite_knife_cellphone_records();

// Three same-class boxes along a line: A (0.9) overlaps B (0.8), B overlaps
// C (0.7), A and C are disjoint. Pairwise IoU of neighbours is 1/3, so use
// kChainThreshold.
std::vector<Detection> nms_chain_fixture();
inline constexpr double kChainThreshold = 0.3;

}  // namespace transplant::testing
