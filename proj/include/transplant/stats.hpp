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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "transplant/detection.hpp"
#include "transplant/sweep.hpp"

namespace transplant {

struct SweepRecord {
  std::string case_id;
  int base_image_id = 0;
  Translation translation;
  double s_constrained = 1.0;
  double s_agnostic = 1.0;
  std::vector<Category> new_classes;
  double max_coverage = 0.0;
  std::size_t n_mod = 0;
  std::size_t n_orig = 0;

  std::size_t new_class_count() const { return new_classes.size(); }
};

// Computes one record from thresholded detection sets. T's box is the case's
// placement rectangle. Both sets are filtered with theta first.
SweepRecord make_record(const TestCase& c, const DetectionSet& modified,
                        const DetectionSet& original, double theta);

// True iff s < tau.
bool affected(double s, double tau);

inline const std::vector<double> kDefaultTaus = {0.3, 0.5, 0.7, 0.95, 0.99};
inline constexpr double kOcclusionLimit = 0.2;

enum class TableRow { kAffected, kClassAgnostic, kOcc20, kNoOcc };
inline constexpr TableRow kTableRows[] = {TableRow::kAffected, TableRow::kClassAgnostic,
                                          TableRow::kOcc20, TableRow::kNoOcc};

const char* to_string(TableRow r);

struct AffectedRow {
  TableRow variant;
  std::size_t denominator = 0;
  // Percentages per tau; empty when denominator is 0 (not applicable).
  std::vector<double> percentages;

  bool applicable() const { return denominator > 0; }
};

struct AffectedTable {
  std::vector<double> taus;
  std::vector<AffectedRow> rows;  // in kTableRows order

  const AffectedRow& row(TableRow r) const { return rows[static_cast<std::size_t>(r)]; }
};

// Pooled over all records. Rows: Affected (s_constrained), class-agnostic
// (s_agnostic), Occ-20 (C_T <= 0.2), No-Occ (C_T == 0). Throws ConfigError
// for empty records or taus that are not strictly ascending within [0, 1].
AffectedTable build_affected_table(const std::vector<SweepRecord>& records,
                                   const std::vector<double>& taus = kDefaultTaus);

// Descending new-class count, ties by case id.
std::vector<SweepRecord> rank_by_new_classes(std::vector<SweepRecord> records);

struct Exemplar {
  SweepRecord record;
  std::vector<Category> incremental;
};

// Greedy scan of the ranked records; keeps a record only when it adds a
// category not contributed by an earlier exemplar. Stops after `limit`.
std::vector<Exemplar> select_novel_exemplars(const std::vector<SweepRecord>& records,
                                             std::size_t limit);

std::string record_line(const SweepRecord& r);
SweepRecord parse_record_line(const std::string& line);

// CSV with header "variant,tau_...,denominator"; one decimal place, "n/a"
// for rows without any record.
std::string render_table_csv(const AffectedTable& table);

// Fixed-width text rendering for terminals.
std::string render_table_text(const AffectedTable& table);

struct ReportInputs {
  AffectedTable table;
  std::vector<std::pair<int, AffectedTable>> per_image;
  std::vector<SweepRecord> records;
  std::vector<Exemplar> exemplars;
  // case_id -> image path, for the exemplar manifest.
  std::map<std::string, std::string> image_paths;
};

// Writes affected_table.csv, affected_table_by_image.csv, records.jsonl and
// exemplars.jsonl into out_dir. Output bytes depend only on the inputs.
void emit_report(const ReportInputs& in, const std::filesystem::path& out_dir);

}  // namespace transplant
