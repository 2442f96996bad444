// Copyright 2026 The MFG-OMD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mfg/experiment.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "mfg/csv.h"
#include "oracles.h"
#include "test_util.h"

namespace mfg {
namespace {

namespace fs = std::filesystem;
using ::mfg::testing::MaxAbsDiff;
using ::mfg::testing::ScratchDir;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string GridConfig(const fs::path& dir, int iterations,
                       const std::string& extra = "") {
  return "[environment]\nbuilder = \"grid\"\nwidth = 4\nheight = 3\n"
         "wrap = \"square\"\nhorizon = 3\n"
         "[algorithm]\nname = \"omd\"\nlearning_rate = 0.5\nmax_iterations = " +
         std::to_string(iterations) + "\n[output]\ndir = \"" + dir.string() +
         "\"\nreproducible = true\n" + extra;
}

TEST(RunExperimentTest, ZeroIterationsWritesHeaderOnly) {
  const fs::path dir = ScratchDir("zero_iterations");
  const RunSummary s = RunExperiment(ParseExperimentConfig(GridConfig(dir, 0)));
  EXPECT_EQ(ReadFile(dir / "exploitability.csv"),
            "iteration,phi_total,phi_pop_0,elapsed_seconds\r\n");
  ASSERT_EQ(s.final_exploitability.size(), 1u);
  EXPECT_GE(s.final_exploitability[0], 0.0);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir / "flow_final.csv"));
}

TEST(RunExperimentTest, ManifestListsChecksums) {
  const fs::path dir = ScratchDir("manifest");
  const RunSummary s = RunExperiment(ParseExperimentConfig(
      GridConfig(dir, 5, "snapshots = [\"final\"]\nsnapshot_timesteps = [0]\n")));
  const auto manifest = nlohmann::json::parse(ReadFile(dir / "manifest.json"));
  EXPECT_EQ(manifest["tool"], "mfg");
  EXPECT_EQ(manifest["version"], kVersion);
  EXPECT_EQ(manifest["started"], "1970-01-01T00:00:00Z");
  EXPECT_EQ(manifest["config"]["environment"]["builder"], "grid");
  ASSERT_EQ(manifest["files"].size(), s.files.size());
  EXPECT_EQ(s.files.size(), 4u);
  for (const auto& f : manifest["files"]) {
    const fs::path path = dir / f["path"].get<std::string>();
    ASSERT_TRUE(fs::exists(path)) << path;
    EXPECT_EQ(f["bytes"].get<std::uintmax_t>(), fs::file_size(path));
    EXPECT_EQ(f["sha256"], Sha256Hex(path.string()));
  }
  EXPECT_TRUE(fs::exists(dir / "snap_t5_n0_pop0.pgm"));
  EXPECT_DOUBLE_EQ(manifest["final_exploitability"]["mean"].get<double>(),
                   s.final_exploitability[0]);
}

TEST(RunExperimentTest, ReproducibleRunsAreByteIdentical) {
  const fs::path a = ScratchDir("repro_a");
  const fs::path b = ScratchDir("repro_b");
  RunExperiment(ParseExperimentConfig(GridConfig(a, 6)));
  RunExperiment(ParseExperimentConfig(GridConfig(b, 6)));
  for (const char* name : {"exploitability.csv", "flow_final.csv"}) {
    EXPECT_EQ(ReadFile(a / name), ReadFile(b / name)) << name;
  }
}

TEST(RunExperimentTest, SweepWritesMeanOfSeeds) {
  const fs::path dir = ScratchDir("sweep");
  const std::string text =
      "[environment]\nbuilder = \"garnet\"\nn_x = 8\nn_a = 2\ns_f = 2\nhorizon = 3\n"
      "[algorithm]\nmax_iterations = 4\n[output]\ndir = \"" +
      dir.string() + "\"\nreproducible = true\n[seeds]\nsweep = [1, 2, 3]\n";
  const RunSummary s = RunExperiment(ParseExperimentConfig(text));
  ASSERT_EQ(s.final_exploitability.size(), 3u);
  std::vector<std::vector<IterationRecord>> runs;
  for (int seed : {1, 2, 3}) {
    std::ifstream in(dir / ("seed_" + std::to_string(seed)) /
                     "exploitability.csv");
    runs.push_back(ReadRunCsv(in));
    ASSERT_EQ(runs.back().size(), 4u);
  }
  std::ifstream in(dir / "exploitability_mean.csv");
  const std::vector<IterationRecord> mean = ReadRunCsv(in);
  ASSERT_EQ(mean.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    const double expected =
        (runs[0][k].phi_total + runs[1][k].phi_total + runs[2][k].phi_total) /
        3.0;
    EXPECT_NEAR(mean[k].phi_total, expected, 1e-15);
  }
  EXPECT_NE(runs[0][3].phi_total, runs[1][3].phi_total);
}

TEST(RunExperimentTest, HDiagnosticFile) {
  const fs::path dir = ScratchDir("h_diag");
  RunExperiment(ParseExperimentConfig(
      GridConfig(dir, 3, "[diagnostics]\nh_reference_iterations = 20\n")));
  const std::string text = ReadFile(dir / "h_diag.csv");
  EXPECT_EQ(text.rfind("iteration,h_diag\r\n1,", 0), 0u) << text;
}

TEST(AverageRecordsTest, MisalignedTracesRejected) {
  std::vector<IterationRecord> a(2), b(1);
  EXPECT_MFG_ERROR(AverageRecords({a, b}), ErrorCode::kDimension);
}

std::vector<std::uint16_t> ReadPgm(const fs::path& path, int* rows,
                                   int* cols) {
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  int max_value = 0;
  in >> magic >> *cols >> *rows >> max_value;
  in.get();
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(max_value, 65535);
  std::vector<std::uint16_t> pixels;
  for (int k = 0; k < *rows * *cols; ++k) {
    const int hi = in.get();
    const int lo = in.get();
    pixels.push_back(static_cast<std::uint16_t>(hi << 8 | lo));
  }
  EXPECT_EQ(in.get(), EOF);
  return pixels;
}

TEST(ExportSnapshotTest, PointMassAndUniform) {
  const fs::path dir = ScratchDir("snapshots");
  DistributionFlow flow(1, 2, 6);
  flow(0, 0, 4) = 1.0;
  for (int x = 0; x < 6; ++x) flow(0, 1, x) = 1.0 / 6;
  const std::vector<std::string> files =
      ExportSnapshot(flow, GridLayout{1, 2, 3}, nullptr, 7, {}, dir.string());
  EXPECT_EQ(files, (std::vector<std::string>{
                       "snap_t7_n0_pop0.pgm", "snap_t7_n0_pop0.csv",
                       "snap_t7_n1_pop0.pgm", "snap_t7_n1_pop0.csv"}));
  int rows = 0, cols = 0;
  const auto point = ReadPgm(dir / files[0], &rows, &cols);
  EXPECT_EQ(rows, 2);
  EXPECT_EQ(cols, 3);
  EXPECT_EQ(point, (std::vector<std::uint16_t>{0, 0, 0, 0, 65535, 0}));
  const auto uniform = ReadPgm(dir / files[2], &rows, &cols);
  EXPECT_EQ(uniform, std::vector<std::uint16_t>(6, 65535));
  const std::string csv = ReadFile(dir / files[1]);
  EXPECT_NE(csv.find("1,1,1\r\n"), std::string::npos) << csv;
}

TEST(ExportSnapshotTest, FloorsAndTimestepSelection) {
  const fs::path dir = ScratchDir("floors");
  DistributionFlow flow(1, 3, 8);
  const auto files =
      ExportSnapshot(flow, GridLayout{2, 2, 2}, nullptr, 0, {2}, dir.string());
  EXPECT_EQ(files.size(), 4u);
  EXPECT_EQ(files[0], "snap_t0_n2_pop0_floor0.pgm");
  EXPECT_EQ(files[2], "snap_t0_n2_pop0_floor1.pgm");
  EXPECT_MFG_ERROR(
      ExportSnapshot(flow, GridLayout{2, 2, 2}, nullptr, 0, {3}, dir.string()),
      ErrorCode::kStructure);
  EXPECT_MFG_ERROR(
      ExportSnapshot(flow, GridLayout{1, 3, 3}, nullptr, 0, {}, dir.string()),
      ErrorCode::kStructure);
}

TEST(FlowCsvTest, RoundTripPlain) {
  const GameSpec spec = oracle::RandomGame(4, 5, 2, 3, 2);
  const Policy pi = oracle::RandomPolicy(4, 2, 4, 5, 2);
  const DistributionFlow flow = ForwardFlow(spec, pi);
  std::stringstream buf;
  WriteFlowCsv(flow, nullptr, buf);
  const DistributionFlow back = ReadFlowCsv(buf, 2, 5, nullptr, 3);
  EXPECT_LE(MaxAbsDiff(flow.values(), back.values()), 1e-12);
  EXPECT_EQ(back, flow);
}

TEST(FlowCsvTest, RoundTripWithTree) {
  const NoiseGame game = oracle::RandomNoiseGame(5, 3, 2, 2, 3);
  const Policy pi = oracle::RandomPolicy(5, 1, game.tree.total_nodes(), 3, 2);
  const DistributionFlow flow = ConditionalForwardFlow(game, pi);
  std::stringstream buf;
  WriteFlowCsv(flow, &game.tree, buf);
  EXPECT_EQ(ReadFlowCsv(buf, 1, 3, &game.tree, 2), flow);
}

TEST(FlowCsvTest, Errors) {
  std::stringstream bad_header("pop,t,x,p\r\n");
  EXPECT_MFG_ERROR(ReadFlowCsv(bad_header, 1, 2, nullptr, 0), ErrorCode::kIo);
  std::stringstream partial(
      "population,timestep,node,state,probability\r\n0,0,0,0,1\r\n");
  EXPECT_MFG_ERROR(ReadFlowCsv(partial, 1, 2, nullptr, 0),
                   ErrorCode::kStructure);
  std::stringstream outside(
      "population,timestep,node,state,probability\r\n0,0,0,5,1\r\n");
  EXPECT_MFG_ERROR(ReadFlowCsv(outside, 1, 2, nullptr, 0),
                   ErrorCode::kStructure);
  std::stringstream garbage(
      "population,timestep,node,state,probability\r\n0,0,0,x,1\r\n");
  EXPECT_MFG_ERROR(ReadFlowCsv(garbage, 1, 2, nullptr, 0), ErrorCode::kIo);
}

TEST(MonotonicityJsonTest, ReportsVerdict) {
  const ExperimentConfig c = ParseExperimentConfig(
      "[environment]\nbuilder = \"grid\"\nwidth = 3\nheight = 3\neta = -1.0\n"
      "horizon = 2\n[monotonicity]\nsamples = 100\n");
  const MonotonicityReport r = CheckMonotone(c);
  EXPECT_FALSE(r.passed());
  const auto j = nlohmann::json::parse(MonotonicityReportJson(r));
  EXPECT_EQ(j["verdict"], "violation");
  EXPECT_EQ(j["samples"], 100);
  EXPECT_FALSE(j["violating_pair"].is_null());
}

TEST(MemoryJsonTest, CountsAsStrings) {
  const auto j = nlohmann::json::parse(
      MemoryEstimateJson(EstimateMemory("building", "fp")));
  EXPECT_EQ(j["total_bytes"], "512000000000");
  EXPECT_EQ(j["algorithm"], "fp");
}

TEST(ExitCodeTest, Mapping) {
  EXPECT_EQ(ExitCodeFor(ErrorCode::kConfig), 2);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kParameter), 2);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kDimension), 2);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kStructure), 2);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kIo), 2);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kNumeric), 3);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kNumericConsistency), 3);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kDomain), 3);
}

TEST(CsvFormatTest, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -0.0}) {
    EXPECT_EQ(ParseDouble(FormatDouble(v)), v);
  }
  EXPECT_MFG_ERROR(ParseDouble("1.0x"), ErrorCode::kIo);
  EXPECT_MFG_ERROR(ParseInt(""), ErrorCode::kIo);
}

}  // namespace
}  // namespace mfg
