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

#include "transplant/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "transplant/error.hpp"
#include "transplant/matching.hpp"

namespace transplant {

using nlohmann::ordered_json;

SweepRecord make_record(const TestCase& c, const DetectionSet& modified,
                        const DetectionSet& original, double theta) {
  const DetectionSet mod = threshold_filter(modified, theta);
  const DetectionSet orig = threshold_filter(original, theta);
  SweepRecord r;
  r.case_id = c.case_id;
  r.base_image_id = c.base_image_id;
  r.translation = c.translation;
  r.n_mod = mod.detections.size();
  r.n_orig = orig.detections.size();
  r.s_constrained = build_match(mod, orig, true).score;
  r.s_agnostic = build_match(mod, orig, false).score;
  r.new_classes = class_set_difference(mod, orig).new_categories;
  r.max_coverage = coverage(orig, Box::from_rect(c.placement())).max_coverage;
  return r;
}

bool affected(double s, double tau) { return s < tau; }

const char* to_string(TableRow r) {
  switch (r) {
    case TableRow::kAffected: return "Affected";
    case TableRow::kClassAgnostic: return "Affected-class-Agnostic";
    case TableRow::kOcc20: return "Affected-Occ-20";
    case TableRow::kNoOcc: return "Affected-No-Occ";
  }
  return "?";
}

AffectedTable build_affected_table(const std::vector<SweepRecord>& records,
                                   const std::vector<double>& taus) {
  if (records.empty()) throw ConfigError("cannot build an affected table from zero records");
  if (taus.empty()) throw ConfigError("at least one tau value is required");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] >= 0.0 && taus[i] <= 1.0)) throw ConfigError("tau values must lie in [0, 1]");
    if (i > 0 && !(taus[i - 1] < taus[i])) {
      throw ConfigError("tau values must be strictly ascending");
    }
  }

  AffectedTable table;
  table.taus = taus;
  for (const TableRow variant : kTableRows) {
    AffectedRow row{variant, 0, {}};
    std::vector<std::size_t> hits(taus.size(), 0);
    for (const SweepRecord& r : records) {
      if (variant == TableRow::kOcc20 && r.max_coverage > kOcclusionLimit) continue;
      if (variant == TableRow::kNoOcc && r.max_coverage != 0.0) continue;
      ++row.denominator;
      const double s = variant == TableRow::kClassAgnostic ? r.s_agnostic : r.s_constrained;
      for (std::size_t k = 0; k < taus.size(); ++k) {
        if (affected(s, taus[k])) ++hits[k];
      }
    }
    if (row.denominator > 0) {
      for (const std::size_t h : hits) {
        row.percentages.push_back(100.0 * static_cast<double>(h) /
                                  static_cast<double>(row.denominator));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<SweepRecord> rank_by_new_classes(std::vector<SweepRecord> records) {
  std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    if (a.new_class_count() != b.new_class_count()) return a.new_class_count() > b.new_class_count();
    return a.case_id < b.case_id;
  });
  return records;
}

std::vector<Exemplar> select_novel_exemplars(const std::vector<SweepRecord>& records,
                                             std::size_t limit) {
  std::vector<Exemplar> out;
  std::set<int> seen;
  for (SweepRecord& r : rank_by_new_classes(records)) {
    if (out.size() >= limit) break;
    std::vector<Category> incremental;
    for (const Category& c : r.new_classes) {
      if (!seen.contains(c.id)) incremental.push_back(c);
    }
    if (incremental.empty()) continue;
    for (const Category& c : incremental) seen.insert(c.id);
    out.push_back({std::move(r), std::move(incremental)});
  }
  return out;
}

namespace {

ordered_json category_names(const std::vector<Category>& cats) {
  ordered_json names = ordered_json::array();
  for (const Category& c : cats) names.push_back(c.name);
  return names;
}

ordered_json category_ids(const std::vector<Category>& cats) {
  ordered_json ids = ordered_json::array();
  for (const Category& c : cats) ids.push_back(c.id);
  return ids;
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string one_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

std::string record_line(const SweepRecord& r) {
  ordered_json j;
  j["case_id"] = r.case_id;
  j["base_image_id"] = r.base_image_id;
  j["t_x"] = r.translation.t_x;
  j["t_y"] = r.translation.t_y;
  j["S_constrained"] = r.s_constrained;
  j["S_agnostic"] = r.s_agnostic;
  j["new_class_count"] = r.new_class_count();
  j["new_classes"] = category_names(r.new_classes);
  j["new_class_ids"] = category_ids(r.new_classes);
  j["C_T"] = r.max_coverage;
  j["n_mod"] = r.n_mod;
  j["n_orig"] = r.n_orig;
  return j.dump();
}

SweepRecord parse_record_line(const std::string& line) {
  try {
    const auto j = ordered_json::parse(line);
    SweepRecord r;
    r.case_id = j.at("case_id").get<std::string>();
    r.base_image_id = j.value("base_image_id", 0);
    r.translation = {j.at("t_x").get<int>(), j.at("t_y").get<int>()};
    r.s_constrained = j.at("S_constrained").get<double>();
    r.s_agnostic = j.at("S_agnostic").get<double>();
    const auto names = j.at("new_classes").get<std::vector<std::string>>();
    const auto ids = j.value("new_class_ids", std::vector<int>{});
    for (std::size_t i = 0; i < names.size(); ++i) {
      r.new_classes.push_back({i < ids.size() ? ids[i] : static_cast<int>(i), names[i]});
    }
    if (j.at("new_class_count").get<std::size_t>() != r.new_classes.size()) {
      throw FormatError("new_class_count disagrees with new_classes");
    }
    r.max_coverage = j.at("C_T").get<double>();
    r.n_mod = j.at("n_mod").get<std::size_t>();
    r.n_orig = j.at("n_orig").get<std::size_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed record: ") + e.what());
  }
}

std::string render_table_csv(const AffectedTable& table) {
  std::ostringstream os;
  os << "variant";
  for (const double tau : table.taus) os << ",tau_" << shortest(tau);
  os << ",denominator\n";
  for (const AffectedRow& row : table.rows) {
    os << to_string(row.variant);
    for (std::size_t k = 0; k < table.taus.size(); ++k) {
      os << ',' << (row.applicable() ? one_decimal(row.percentages[k]) : "n/a");
    }
    os << ',' << row.denominator << '\n';
  }
  return os.str();
}

std::string render_table_text(const AffectedTable& table) {
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-26s", "");
  os << buf;
  for (const double tau : table.taus) {
    std::snprintf(buf, sizeof(buf), "%9s", ("tau=" + shortest(tau)).c_str());
    os << buf;
  }
  os << "        n\n";
  for (const AffectedRow& row : table.rows) {
    std::snprintf(buf, sizeof(buf), "%%%-25s", to_string(row.variant));
    os << buf;
    for (std::size_t k = 0; k < table.taus.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%9s",
                    row.applicable() ? one_decimal(row.percentages[k]).c_str() : "n/a");
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), "%9zu", row.denominator);
    os << buf << '\n';
  }
  return os.str();
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

void emit_report(const ReportInputs& in, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  write_text(out_dir / "affected_table.csv", render_table_csv(in.table));

  std::ostringstream by_image;
  bool header = true;
  for (const auto& [image_id, table] : in.per_image) {
    std::istringstream rows(render_table_csv(table));
    std::string line;
    std::getline(rows, line);
    if (header) {
      by_image << "base_image_id," << line << '\n';
      header = false;
    }
    while (std::getline(rows, line)) by_image << image_id << ',' << line << '\n';
  }
  write_text(out_dir / "affected_table_by_image.csv", by_image.str());

  std::ostringstream records;
  for (const SweepRecord& r : in.records) records << record_line(r) << '\n';
  write_text(out_dir / "records.jsonl", records.str());

  std::ostringstream exemplars;
  for (const Exemplar& e : in.exemplars) {
    ordered_json j;
    j["case_id"] = e.record.case_id;
    j["base_image_id"] = e.record.base_image_id;
    const auto it = in.image_paths.find(e.record.case_id);
    j["image"] = it == in.image_paths.end() ? "" : it->second;
    j["new_class_count"] = e.record.new_class_count();
    j["incremental_classes"] = category_names(e.incremental);
    exemplars << j.dump() << '\n';
  }
  write_text(out_dir / "exemplars.jsonl", exemplars.str());
}

}  // namespace transplant
