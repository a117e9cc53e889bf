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

#include "support/fixtures.hpp"

namespace transplant::testing {

SweepRecord make_sweep_record(const char* case_id, double s_constrained, double s_agnostic,
                              double max_coverage, std::vector<Category> new_classes) {
  SweepRecord r;
  r.case_id = case_id;
  r.base_image_id = 1;
  r.s_constrained = s_constrained;
  r.s_agnostic = s_agnostic;
  r.max_coverage = max_coverage;
  r.new_classes = std::move(new_classes);
  return r;
}

std::vector<SweepRecord> six_record_fixture() {
  return {
      make_sweep_record("r1", 1.0, 1.0, 0.0),   make_sweep_record("r2", 0.4, 0.6, 0.0),
      make_sweep_record("r3", 0.2, 0.25, 0.1),  make_sweep_record("r4", 0.96, 0.98, 0.2),
      make_sweep_record("r5", 0.0, 0.5, 0.5),   make_sweep_record("r6", 0.7, 0.7, 0.3),
  };
}

std::vector<ExpectedRow> six_record_expectations() {
  return {
      {TableRow::kAffected, {2, 3, 3, 4, 5}, 6},
      {TableRow::kClassAgnostic, {1, 1, 3, 4, 5}, 6},
      {TableRow::kOcc20, {1, 2, 2, 2, 3}, 4},
      {TableRow::kNoOcc, {0, 1, 1, 1, 1}, 2},
  };
}

std::vector<SweepRecord> kite_knife_cellphone_records() {
  const Category kite{38, "kite"}, knife{49, "knife"}, cellphone{77, "cell phone"};
  return {
      make_sweep_record("b5-s9-i4-transplant-x0-y0", 1.0, 1.0, 0.0),
      make_sweep_record("b5-s9-i4-transplant-x10-y0", 0.9, 0.9, 0.0, {kite}),
      make_sweep_record("b5-s9-i4-transplant-x20-y0", 0.8, 0.9, 0.1, {kite}),
      make_sweep_record("b5-s9-i4-transplant-x30-y0", 0.7, 0.8, 0.0, {knife}),
      make_sweep_record("b5-s9-i4-transplant-x40-y0", 0.9, 0.9, 0.0, {kite}),
      make_sweep_record("b5-s9-i4-transplant-x50-y0", 0.6, 0.7, 0.3, {cellphone}),
      make_sweep_record("b5-s9-i4-transplant-x60-y0", 1.0, 1.0, 0.0),
      make_sweep_record("b5-s9-i4-transplant-x70-y0", 0.8, 0.8, 0.0, {knife}),
  };
}

std::vector<Detection> nms_chain_fixture() {
  return {
      {{0, 0, 10, 10}, 0.9, {1, "red"}},
      {{5, 0, 15, 10}, 0.8, {1, "red"}},
      {{10, 0, 20, 10}, 0.7, {1, "red"}},
  };
}

}  // namespace transplant::testing
