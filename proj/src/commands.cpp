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

#include "transplant/commands.hpp"

#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "transplant/detector.hpp"
#include "transplant/error.hpp"
#include "transplant/image_io.hpp"

namespace transplant {

namespace fs = std::filesystem;

fs::path manifest_path(const RunConfig& run) { return run.out / "manifest.jsonl"; }
fs::path detections_path(const RunConfig& run) {
  return run.detections.value_or(run.out / "detections.jsonl");
}
fs::path partial_detections_path(const RunConfig& run) {
  return run.out / "detections.partial.jsonl";
}
fs::path report_dir(const RunConfig& run) { return run.out / "report"; }

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Stops handing out work
// after the first exception, which is rethrown once all workers have joined.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max(1, jobs), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

DatasetIndex load_checked(const RunConfig& run, std::ostream& log) {
  if (run.annotations.empty()) throw ConfigError("--annotations is required");
  if (!fs::is_regular_file(run.annotations)) {
    throw ConfigError("annotations file not found: " + run.annotations.string());
  }
  DatasetIndex dataset = load_dataset(run.annotations, run.images);
  for (const LoadIssue& issue : dataset.issues()) {
    log << "warning: " << to_string(issue.kind) << ": " << issue.message << '\n';
  }
  return dataset;
}

void require_out(const RunConfig& run) {
  if (run.out.empty()) throw ConfigError("--out is required");
}

}  // namespace

GenerateSummary cmd_generate(const RunConfig& run, std::ostream& log) {
  require_out(run);
  const DatasetIndex dataset = load_checked(run, log);

  int base_image_id = 0;
  if (run.base_image) {
    base_image_id = *run.base_image;
  } else {
    std::vector<int> present;
    for (const auto& [id, rec] : dataset.images()) {
      if (rec.file_present) present.push_back(id);
    }
    if (present.empty()) throw ConfigError("dataset has no image files to use as a base");
    std::mt19937_64 rng(run.sweep.seed ^ 0x9e3779b97f4a7c15ULL);
    base_image_id = present[rng() % present.size()];
  }

  SourceSelection selection;
  selection.instance_id = run.instance;
  selection.source_image_id = run.source_image;
  selection.duplicate = run.duplicate;
  const SweepPlan plan = plan_sweep(dataset, base_image_id, selection, run.sweep);

  std::error_code ec;
  fs::create_directories(run.out / "images", ec);
  if (ec) throw IoError("cannot create " + (run.out / "images").string() + ": " + ec.message());

  std::vector<ManifestEntry> entries(plan.cases.size());
  parallel_for(plan.cases.size(), run.jobs, [&](std::size_t i) {
    const TestCase& c = plan.cases[i];
    const std::string rel = "images/" + c.case_id + ".png";
    write_png(run.out / rel, plan.render(c));
    entries[i] = {c, rel};
  });
  write_manifest(manifest_path(run), entries);

  const TestCase& first = plan.cases.front();
  log << "generated " << plan.cases.size() << " cases (base image " << base_image_id
      << ", instance " << first.instance_id << ", sprite " << first.sprite_width << "x"
      << first.sprite_height << ")\n";
  return {base_image_id, first.instance_id, plan.cases.size()};
}

RunSummary cmd_run(const RunConfig& run, std::ostream& log) {
  require_out(run);
  const auto manifest = read_manifest(manifest_path(run));
  auto detector = make_detector(run.detector);

  if (const auto* file = dynamic_cast<const FileDetector*>(detector.get())) {
    for (const ManifestEntry& e : manifest) {
      if (!file->contains(e.test_case.case_id)) {
        throw Error("detection file has no record for case " + e.test_case.case_id);
      }
    }
  }

  // Resume from an earlier interrupted run. A torn final line is ignored.
  std::map<std::string, DetectionSet> done;
  const fs::path partial = partial_detections_path(run);
  if (fs::exists(partial)) {
    std::ifstream in(partial);
    std::string line;
    while (std::getline(in, line)) {
      try {
        ParsedRecord rec = parse_exchange_record(line);
        done[rec.set.case_id] = std::move(rec.set);
      } catch (const FormatError&) {
      }
    }
  }
  std::set<std::string> manifest_ids;
  for (const ManifestEntry& e : manifest) manifest_ids.insert(e.test_case.case_id);
  std::erase_if(done, [&](const auto& kv) { return !manifest_ids.contains(kv.first); });
  const std::size_t resumed = done.size();

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    if (!done.contains(manifest[i].test_case.case_id)) todo.push_back(i);
  }

  std::mutex mutex;
  std::ofstream partial_out(partial, std::ios::binary | std::ios::app);
  if (!partial_out) throw IoError("cannot write " + partial.string());
  try {
    parallel_for(todo.size(), run.jobs, [&](std::size_t k) {
      const ManifestEntry& e = manifest[todo[k]];
      const ImageBuffer image = read_image(run.out / e.path);
      DetectionSet set = detector->detect(image, e.test_case.case_id);
      set.case_id = e.test_case.case_id;
      std::lock_guard lock(mutex);
      partial_out << to_exchange_record(set) << '\n';
      partial_out.flush();
      done[set.case_id] = std::move(set);
    });
  } catch (...) {
    partial_out.close();
    log << "run interrupted after " << done.size() << " of " << manifest.size()
        << " cases; partial results kept in " << partial.string() << '\n';
    throw;
  }
  partial_out.close();

  std::vector<DetectionSet> ordered;
  ordered.reserve(manifest.size());
  for (const ManifestEntry& e : manifest) ordered.push_back(done.at(e.test_case.case_id));
  write_detections(detections_path(run), ordered);
  fs::remove(partial);
  log << "wrote " << ordered.size() << " detection records (" << resumed << " resumed)\n";
  return {ordered.size(), resumed};
}

ScoreSummary cmd_score(const RunConfig& run, std::ostream& out) {
  require_out(run);
  const auto manifest = read_manifest(manifest_path(run));
  const DetectionFile file = load_detections(detections_path(run));
  for (const std::string& issue : file.issues) out << "warning: " << issue << '\n';

  std::set<std::string> detector_ids;
  for (const auto& [id, set] : file.sets) detector_ids.insert(set.detector_id);
  if (detector_ids.size() > 1) {
    throw Error("detections come from more than one detector (" + *detector_ids.begin() + ", " +
                *std::next(detector_ids.begin()) + ")");
  }

  const auto lookup = [&](const std::string& case_id) -> DetectionSet {
    const auto it = file.sets.find(case_id);
    if (it == file.sets.end()) throw Error("no detections for case " + case_id);
    DetectionSet set = it->second;
    set.normalize();
    return set;
  };

  std::map<int, DetectionSet> null_sets;
  for (const ManifestEntry& e : manifest) {
    if (e.test_case.variant == CaseVariant::kNull) {
      null_sets[e.test_case.base_image_id] = lookup(e.test_case.case_id);
    }
  }

  const double theta = run.sweep.confidence_threshold;
  ReportInputs report;
  std::map<int, std::vector<SweepRecord>> by_image;
  for (const ManifestEntry& e : manifest) {
    const TestCase& c = e.test_case;
    report.image_paths[c.case_id] = e.path;
    if (c.variant == CaseVariant::kNull) continue;
    const auto null_it = null_sets.find(c.base_image_id);
    if (null_it == null_sets.end()) {
      throw Error("missing null case for base image " + std::to_string(c.base_image_id) +
                  " (no unmodified-image detections)");
    }
    SweepRecord r = make_record(c, lookup(c.case_id), null_it->second, theta);
    by_image[c.base_image_id].push_back(r);
    report.records.push_back(std::move(r));
  }
  if (report.records.empty()) throw Error("manifest has no cases to score");

  report.table = build_affected_table(report.records, run.taus);
  for (const auto& [image_id, records] : by_image) {
    report.per_image.emplace_back(image_id, build_affected_table(records, run.taus));
    for (Exemplar& ex : select_novel_exemplars(records, run.exemplar_limit)) {
      report.exemplars.push_back(std::move(ex));
    }
  }
  emit_report(report, report_dir(run));
  out << render_table_text(report.table);
  return {report.table, report.records.size(), report.exemplars.size()};
}

AblationVariant ablation_variant_from_string(const std::string& s) {
  for (AblationVariant v : {AblationVariant::kOutsideZero, AblationVariant::kMaskOnly,
                            AblationVariant::kMaskPlusNoise}) {
    if (s == to_string(v)) return v;
  }
  throw ConfigError("unknown ablation variant '" + s +
                    "' (expected outside-zero, mask-only or mask-plus-noise)");
}

void cmd_ablate(const RunConfig& run, const AblateOptions& options) {
  std::ostringstream sink;
  const DatasetIndex dataset = load_checked(run, sink);
  const Instance& inst = dataset.instance(options.instance_id);
  const ImageBuffer image =
      options.image ? read_image(*options.image) : dataset.load_pixels(inst.image_id);
  if (inst.mask.size() == 0 || inst.mask.foreground_count() == 0) {
    throw Error("instance " + std::to_string(inst.instance_id) + " has no mask");
  }
  if (inst.mask.width() != image.width() || inst.mask.height() != image.height()) {
    throw Error("image size does not match the mask of instance " +
                std::to_string(inst.instance_id));
  }
  if (options.output.empty()) throw ConfigError("--output is required");
  if (options.output.has_parent_path()) fs::create_directories(options.output.parent_path());
  write_png(options.output,
            ablate(image, inst.pixel_box(), inst.mask, options.variant, options.seed));
}

ProbeResult cmd_nms_probe(const NmsProbeOptions& options, std::ostream& out) {
  const DetectionFile file = load_detections(options.detections);
  const DetectionSet* set = nullptr;
  if (options.case_id) {
    const auto it = file.sets.find(*options.case_id);
    if (it == file.sets.end()) throw ConfigError("no record for case " + *options.case_id);
    set = &it->second;
  } else if (file.sets.size() == 1) {
    set = &file.sets.begin()->second;
  } else {
    throw ConfigError("detection file holds " + std::to_string(file.sets.size()) +
                      " records; select one with --case");
  }

  const ProbeResult r =
      chain_reaction_probe(set->detections, options.removed_index, options.nms, options.probe);
  nlohmann::ordered_json j;
  j["case_id"] = set->case_id;
  j["removed_index"] = options.removed_index;
  j["iou_threshold"] = options.nms.iou_threshold;
  j["kept_before"] = r.kept_before;
  j["kept_after"] = r.kept_after;
  j["newly_surfaced"] = r.newly_surfaced;
  j["newly_suppressed"] = r.newly_suppressed;
  out << j.dump() << '\n';
  return r;
}

}  // namespace transplant
