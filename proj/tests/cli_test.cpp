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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "support/fixtures.hpp"
#include "support/synthetic_corpus.hpp"
#include "transplant/commands.hpp"
#include "transplant/detector.hpp"
#include "transplant/error.hpp"
#include "transplant/image_io.hpp"

namespace transplant {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code = -1;
  std::string output;
};

Invocation bench(const std::string& args) {
  const std::string cmd = std::string(TRANSPLANT_BENCH_BINARY) + " " + args + " 2>&1";
  Invocation inv;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return inv;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) inv.output.append(buf.data(), n);
  const int status = ::pclose(pipe);
  inv.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return inv;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::size_t line_count(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Hand fixture: blue bar (instance 21) swept across image 1 with its red square.
RunConfig hand_fixture_run(const std::string& name) {
  const fs::path dir = testing::fresh_temp_dir(name);
  const auto corpus = testing::write_corpus(dir / "data", testing::hand_fixture_scenes());
  RunConfig run;
  run.annotations = corpus.annotations;
  run.images = corpus.images;
  run.out = dir / "out";
  run.base_image = 1;
  run.instance = 21;
  run.sweep.confidence_threshold = 0.0;
  return run;
}

TEST(CmdGenerate, ManifestHasTranslationsPlusNull) {
  const RunConfig run = hand_fixture_run("cli_generate");
  std::ostringstream log;
  const GenerateSummary s = cmd_generate(run, log);
  EXPECT_EQ(s.cases, 19u);  // 6 x 3 translations + null
  EXPECT_EQ(line_count(manifest_path(run)), 19u);
  const auto manifest = read_manifest(manifest_path(run));
  for (const ManifestEntry& e : manifest) EXPECT_TRUE(fs::exists(run.out / e.path)) << e.path;
  const std::string first = slurp(manifest_path(run));
  cmd_generate(run, log);
  EXPECT_EQ(slurp(manifest_path(run)), first);
}

TEST(CmdGenerate, ParallelMatchesSerial) {
  RunConfig a = hand_fixture_run("cli_gen_serial");
  RunConfig b = hand_fixture_run("cli_gen_parallel");
  b.jobs = 4;
  std::ostringstream log;
  cmd_generate(a, log);
  cmd_generate(b, log);
  EXPECT_EQ(slurp(manifest_path(a)), slurp(manifest_path(b)));
  for (const ManifestEntry& e : read_manifest(manifest_path(a))) {
    EXPECT_EQ(slurp(a.out / e.path), slurp(b.out / e.path));
  }
}

TEST(Pipeline, HandFixtureOracle) {
  RunConfig run = hand_fixture_run("cli_oracle");
  std::ostringstream log, out;
  cmd_generate(run, log);
  const RunSummary rs = cmd_run(run, log);
  EXPECT_EQ(rs.records, 19u);
  EXPECT_FALSE(fs::exists(partial_detections_path(run)));
  const ScoreSummary s = cmd_score(run, out);
  EXPECT_EQ(s.records, 18u);

  // Hand trace: the bar at x in {0, 10}, y = 0 leaves half the square as a
  // rectangle (S = 0.5, C_T = 0.5); at y = 10 it leaves an L the stub ignores
  // (S_c = 0, S_a = IoU(bar, square) = 0.2, C_T = 0.25); elsewhere S = 1, C_T = 0.
  const double two = 100.0 * 2 / 18, four = 100.0 * 4 / 18;
  const std::vector<double> affected = {two, two, four, four, four};
  for (TableRow row : {TableRow::kAffected, TableRow::kClassAgnostic}) {
    ASSERT_EQ(s.table.row(row).denominator, 18u);
    for (std::size_t k = 0; k < 5; ++k) {
      EXPECT_NEAR(s.table.row(row).percentages[k], affected[k], 1e-9) << to_string(row);
    }
  }
  for (TableRow row : {TableRow::kOcc20, TableRow::kNoOcc}) {
    ASSERT_EQ(s.table.row(row).denominator, 14u);
    for (double p : s.table.row(row).percentages) EXPECT_EQ(p, 0.0);
  }

  std::map<std::pair<int, int>, SweepRecord> by_t;
  std::istringstream records(slurp(report_dir(run) / "records.jsonl"));
  std::string line;
  while (std::getline(records, line)) {
    const SweepRecord r = parse_record_line(line);
    by_t[{r.translation.t_x, r.translation.t_y}] = r;
    ASSERT_EQ(r.new_classes.size(), 1u);
    EXPECT_EQ(r.new_classes[0].name, "blue");
  }
  ASSERT_EQ(by_t.size(), 18u);
  for (int x : {0, 10}) {
    const SweepRecord& top = by_t[std::make_pair(x, 0)];
    const SweepRecord& mid = by_t[std::make_pair(x, 10)];
    EXPECT_DOUBLE_EQ(top.s_constrained, 0.5);
    EXPECT_DOUBLE_EQ(top.s_agnostic, 0.5);
    EXPECT_DOUBLE_EQ(top.max_coverage, 0.5);
    EXPECT_DOUBLE_EQ(mid.s_constrained, 0.0);
    EXPECT_DOUBLE_EQ(mid.s_agnostic, 0.2);
    EXPECT_DOUBLE_EQ(mid.max_coverage, 0.25);
  }
  EXPECT_DOUBLE_EQ(by_t[std::make_pair(30, 20)].s_constrained, 1.0);
  EXPECT_EQ(s.exemplars, 1u);
  EXPECT_NE(out.str().find("Affected-No-Occ"), std::string::npos);

  const std::string csv = slurp(report_dir(run) / "affected_table.csv");
  cmd_score(run, out);
  EXPECT_EQ(slurp(report_dir(run) / "affected_table.csv"), csv);
}

TEST(CmdScore, SingleTauGivesOneColumn) {
  RunConfig run = hand_fixture_run("cli_one_tau");
  std::ostringstream log;
  cmd_generate(run, log);
  cmd_run(run, log);
  run.taus = {0.5};
  cmd_score(run, log);
  std::istringstream csv(slurp(report_dir(run) / "affected_table.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "variant,tau_0.5,denominator");
}

TEST(CmdScore, MissingNullCase) {
  RunConfig run = hand_fixture_run("cli_no_null");
  std::ostringstream log;
  cmd_generate(run, log);
  cmd_run(run, log);
  auto file = load_detections(detections_path(run));
  std::vector<DetectionSet> kept;
  for (auto& [id, set] : file.sets) {
    if (id.find("-null-") == std::string::npos) kept.push_back(set);
  }
  write_detections(detections_path(run), kept);
  EXPECT_THROW(cmd_score(run, log), Error);
}

TEST(CmdScore, MixedDetectorsRejected) {
  RunConfig run = hand_fixture_run("cli_mixed");
  std::ostringstream log;
  cmd_generate(run, log);
  cmd_run(run, log);
  auto file = load_detections(detections_path(run));
  std::vector<DetectionSet> sets;
  for (auto& [id, set] : file.sets) sets.push_back(set);
  sets.back().detector_id = "other";
  write_detections(detections_path(run), sets);
  EXPECT_THROW(cmd_score(run, log), Error);
}

TEST(CmdRun, ResumesFromPartialFile) {
  RunConfig run = hand_fixture_run("cli_resume");
  std::ostringstream log;
  cmd_generate(run, log);
  const auto manifest = read_manifest(manifest_path(run));
  {
    std::ofstream partial(partial_detections_path(run));
    StubDetector stub;
    for (std::size_t i = 0; i < 5; ++i) {
      const auto& e = manifest[i];
      partial << to_exchange_record(stub.detect(read_image(run.out / e.path), e.test_case.case_id))
              << '\n';
    }
    partial << "{\"case_id\": \"torn";
  }
  const RunSummary rs = cmd_run(run, log);
  EXPECT_EQ(rs.resumed, 5u);
  EXPECT_EQ(rs.records, manifest.size());
  RunConfig fresh = hand_fixture_run("cli_resume_fresh");
  cmd_generate(fresh, log);
  cmd_run(fresh, log);
  EXPECT_EQ(slurp(detections_path(run)), slurp(detections_path(fresh)));
}

TEST(CmdNmsProbe, ChainFixtureJson) {
  const fs::path dir = testing::fresh_temp_dir("cli_probe");
  write_detections(dir / "chain.jsonl", {{"chain", "hand", testing::nms_chain_fixture()}});
  NmsProbeOptions opts;
  opts.detections = dir / "chain.jsonl";
  opts.removed_index = 0;
  opts.nms.iou_threshold = testing::kChainThreshold;
  std::ostringstream out;
  cmd_nms_probe(opts, out);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["kept_before"], nlohmann::json::parse("[0, 2]"));
  EXPECT_EQ(j["kept_after"], nlohmann::json::parse("[1]"));
  EXPECT_EQ(j["newly_suppressed"], nlohmann::json::parse("[0, 2]"));
}

class BenchBinary : public ::testing::Test {
 protected:
  void SetUp() override {
    run = hand_fixture_run(std::string("bin_") +
                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
    dataset_flags = "--annotations " + run.annotations.string() + " --images " + run.images.string();
  }
  RunConfig run;
  std::string dataset_flags;
};

TEST_F(BenchBinary, UsageErrorsExitTwo) {
  EXPECT_EQ(bench("").code, 2);
  EXPECT_EQ(bench("frobnicate").code, 2);
  EXPECT_EQ(bench("generate --stride notanumber").code, 2);
  EXPECT_EQ(bench("--help").code, 0);
}

TEST_F(BenchBinary, MissingAnnotationsNamesPath) {
  const Invocation inv = bench("generate --annotations /no/such/instances.json --out " +
                               run.out.string());
  EXPECT_EQ(inv.code, 2);
  EXPECT_NE(inv.output.find("/no/such/instances.json"), std::string::npos) << inv.output;
}

TEST_F(BenchBinary, EndToEndStub) {
  ASSERT_EQ(bench("generate " + dataset_flags + " --base-image 1 --instance 21 --out " +
                  run.out.string() + " --jobs 2")
                .code,
            0);
  ASSERT_EQ(bench("run --out " + run.out.string() + " --detector stub --jobs 2").code, 0);
  EXPECT_EQ(line_count(detections_path(run)), 19u);
  const Invocation score =
      bench("score --out " + run.out.string() + " --threshold 0 --tau 0.7 --tau 0.3");
  ASSERT_EQ(score.code, 0) << score.output;
  EXPECT_NE(score.output.find("22.2"), std::string::npos) << score.output;
  std::istringstream csv(slurp(report_dir(run) / "affected_table.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "variant,tau_0.3,tau_0.7,denominator");
}

TEST_F(BenchBinary, InvalidThresholdExitTwo) {
  ASSERT_EQ(bench("generate " + dataset_flags + " --base-image 1 --instance 21 --out " +
                  run.out.string())
                .code,
            0);
  ASSERT_EQ(bench("run --out " + run.out.string()).code, 0);
  EXPECT_EQ(bench("score --out " + run.out.string() + " --threshold 1.5").code, 2);
}

TEST_F(BenchBinary, FileBackendMissingCase) {
  ASSERT_EQ(bench("generate " + dataset_flags + " --base-image 1 --instance 21 --out " +
                  run.out.string())
                .code,
            0);
  const fs::path dets = run.out / "external.jsonl";
  write_detections(dets, {{"b1-s2-i21-null-x0-y0", "ext", {}}});
  const Invocation inv = bench("run --out " + run.out.string() + " --detector file:" + dets.string());
  EXPECT_NE(inv.code, 0);
  EXPECT_NE(inv.output.find("b1-s2-i21-transplant-x0-y0"), std::string::npos) << inv.output;
}

TEST_F(BenchBinary, HttpServiceDownKeepsPartialState) {
  ASSERT_EQ(bench("generate " + dataset_flags + " --base-image 1 --instance 21 --out " +
                  run.out.string())
                .code,
            0);
  // Seed one finished record so the retained state is visible.
  const auto manifest = read_manifest(manifest_path(run));
  {
    std::ofstream partial(partial_detections_path(run));
    partial << to_exchange_record({manifest[0].test_case.case_id, "stub-v1", {}}) << '\n';
  }
  const Invocation inv = bench("run --out " + run.out.string() +
                               " --detector http:127.0.0.1:1");
  EXPECT_NE(inv.code, 0);
  EXPECT_NE(inv.code, 2);
  EXPECT_TRUE(fs::exists(partial_detections_path(run)));
  EXPECT_GE(line_count(partial_detections_path(run)), 1u);
  EXPECT_FALSE(fs::exists(detections_path(run)));
}

TEST_F(BenchBinary, NmsProbe) {
  const fs::path dets = run.out.parent_path() / "chain.jsonl";
  std::vector<Detection> d = testing::nms_chain_fixture();
  d.push_back({{100, 100, 110, 110}, 0.5, {1, "red"}});
  write_detections(dets, {{"chain", "hand", d}});
  const Invocation chain = bench("nms-probe --detections " + dets.string() +
                                 " --remove 0 --threshold 0.3");
  ASSERT_EQ(chain.code, 0) << chain.output;
  EXPECT_NE(chain.output.find("\"newly_suppressed\":[0,2]"), std::string::npos) << chain.output;
  const Invocation isolated = bench("nms-probe --detections " + dets.string() +
                                    " --remove 3 --threshold 0.3");
  EXPECT_NE(isolated.output.find("\"newly_surfaced\":[],\"newly_suppressed\":[3]"),
            std::string::npos)
      << isolated.output;
  EXPECT_EQ(bench("nms-probe --detections " + dets.string() + " --remove 9").code, 2);
}

TEST_F(BenchBinary, AblateVariants) {
  const fs::path out = run.out.parent_path();
  const std::string base = "ablate " + dataset_flags + " --instance 11 ";
  for (const char* v : {"outside-zero", "mask-only", "mask-plus-noise"}) {
    const Invocation inv = bench(base + "--variant " + v + " --seed 3 -o " +
                                 (out / (std::string(v) + ".png")).string());
    ASSERT_EQ(inv.code, 0) << inv.output;
  }
  ASSERT_EQ(bench(base + "--variant mask-plus-noise --seed 3 -o " + (out / "again.png").string()).code, 0);
  EXPECT_EQ(slurp(out / "again.png"), slurp(out / "mask-plus-noise.png"));

  // The square fills its own box, so mask-only keeps it and zeroes the rest.
  const ImageBuffer img = read_image(out / "mask-only.png");
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const std::uint8_t* p = img.pixel(x, y);
      if (x < 20 && y < 20) {
        EXPECT_EQ(p[0], 255);
      } else {
        ASSERT_EQ(p[0] | p[1] | p[2], 0) << x << "," << y;
      }
    }
  }
  EXPECT_EQ(bench(base + "--variant sideways -o " + (out / "x.png").string()).code, 2);
  EXPECT_EQ(bench(base.substr(0, base.size() - 12) + "--instance 999 -o " + (out / "x.png").string())
                .code,
            2);
}

}  // namespace
}  // namespace transplant
