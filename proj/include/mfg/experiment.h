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

// Experiment plumbing shared by the C API and the command line tool:
// config interpretation, runs with traces and snapshots, seed sweeps,
// manifests, and heatmap export.

#ifndef MFG_EXPERIMENT_H_
#define MFG_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mfg/config.h"
#include "mfg/diagnostics.h"
#include "mfg/environments.h"
#include "mfg/errors.h"
#include "mfg/solvers.h"

namespace mfg {

inline constexpr char kVersion[] = "1.0.0";

struct ExperimentConfig {
  ConfigDocument document;  // echoed into the manifest

  // [environment]: either `preset` or `builder` plus builder parameters.
  std::string preset;
  std::string builder;

  // [algorithm]
  SolverConfig solver;

  // [output]
  std::string output_dir = "out";
  std::vector<int> snapshot_timesteps;  // empty: every timestep
  bool reproducible = false;

  // [seeds]: a single seed or a sweep.
  std::vector<std::uint64_t> seeds{0};

  // [diagnostics]: OMD iterations for the reference policy of h_diag.csv;
  // 0 disables the diagnostic.
  int h_reference_iterations = 0;

  // [monotonicity]
  int monotonicity_samples = 10000;
  std::uint64_t monotonicity_seed = 0;

  bool sweep() const { return seeds.size() > 1; }
};

// Throws kConfig on unknown sections/keys, bad types or inconsistent values.
ExperimentConfig ParseExperimentConfig(const std::string& text);
ExperimentConfig LoadExperimentConfig(const std::string& path);
// Re-derives the typed fields after document edits (command line overrides).
ExperimentConfig InterpretConfig(ConfigDocument document);

Environment BuildEnvironment(const ExperimentConfig& config,
                             std::uint64_t seed);

struct RunSummary {
  std::vector<std::string> files;  // relative to the output directory
  std::vector<double> final_exploitability;  // per seed
};

// Writes exploitability.csv, h_diag.csv (optional), snapshots, flow_final.csv
// and manifest.json. Sweeps write one seed_{s}/ directory per seed plus
// exploitability_mean.csv. Throws mfg::Error.
RunSummary RunExperiment(const ExperimentConfig& config);

MonotonicityReport CheckMonotone(const ExperimentConfig& config);
std::string MonotonicityReportJson(const MonotonicityReport& report);

std::string MemoryEstimateJson(const MemoryEstimate& estimate);

// Flow CSV: population,timestep,node,state,probability. `tree` maps slots to
// (timestep, node); without it slot = timestep and node = 0.
void WriteFlowCsv(const DistributionFlow& flow, const NoiseTree* tree,
                  std::ostream& out);
DistributionFlow ReadFlowCsv(std::istream& in, int num_populations,
                             int num_states, const NoiseTree* tree,
                             int horizon);

// Heatmaps of the flow at the given timesteps (all when empty): one 16-bit
// PGM and one CSV per population and floor, named
// snap_t{iteration}_n{timestep}_pop{i}[_floor{f}][_node{k}]. Returns the
// file names written into `dir`.
std::vector<std::string> ExportSnapshot(const DistributionFlow& flow,
                                        const GridLayout& layout,
                                        const NoiseTree* tree, int iteration,
                                        const std::vector<int>& timesteps,
                                        const std::string& dir);

// Mean over runs of every numeric column except iteration, matched by row.
std::vector<IterationRecord> AverageRecords(
    const std::vector<std::vector<IterationRecord>>& runs);

std::string Sha256Hex(const std::string& path);

// 0 ok, 2 config or input error, 3 numeric error.
int ExitCodeFor(ErrorCode code);

}  // namespace mfg

#endif  // MFG_EXPERIMENT_H_
