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

// Command line front end. Talks to the library only through the C API.
//
//   mfg run --config exp.toml [--seed N] [--preset NAME] [--out DIR]
//   mfg check-monotone --config exp.toml
//   mfg estimate-memory --preset building --algorithm omd
//   mfg export --config exp.toml --flow out/flow_final.csv --out heatmaps
//
// Exit codes: 0 ok, 2 config error, 3 numeric error, 4 monotonicity
// violation.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mfg/c_api.h"

namespace {

constexpr int kExitMonotonicityViolation = 4;

struct CommonFlags {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string algorithm;
  bool reproducible = false;
};

int Report(mfg_status status) {
  std::cerr << "mfg: " << mfg_status_name(status) << ": " << mfg_last_error()
            << "\n";
  return mfg_exit_code(status);
}

// Loads --config (or a bare --preset) and applies the overrides.
int LoadConfig(const CommonFlags& flags, mfg_config** config) {
  mfg_status status;
  if (!flags.config.empty()) {
    status = mfg_config_load(flags.config.c_str(), config);
    if (status == MFG_OK && !flags.preset.empty()) {
      status = mfg_config_set_preset(*config, flags.preset.c_str());
    }
  } else if (!flags.preset.empty()) {
    status = mfg_config_from_preset(flags.preset.c_str(), config);
  } else {
    std::cerr << "mfg: one of --config or --preset is required\n";
    return 2;
  }
  if (status == MFG_OK && flags.seed) {
    status = mfg_config_set_seed(*config, *flags.seed);
  }
  if (status == MFG_OK && !flags.out.empty()) {
    status = mfg_config_set_output(*config, flags.out.c_str());
  }
  if (status == MFG_OK && !flags.algorithm.empty()) {
    status = mfg_config_set_algorithm(*config, flags.algorithm.c_str());
  }
  if (status == MFG_OK && flags.reproducible) {
    status = mfg_config_set_reproducible(*config, 1);
  }
  if (status != MFG_OK) {
    mfg_config_free(*config);
    *config = nullptr;
    return Report(status);
  }
  return 0;
}

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config file");
  cmd->add_option("--preset", flags.preset,
                  "Desk preset (replaces the config environment)");
  cmd->add_option("--seed", flags.seed, "Single seed (replaces the sweep)");
}

int CmdRun(const CommonFlags& flags) {
  mfg_config* config = nullptr;
  if (int code = LoadConfig(flags, &config); code != 0) return code;
  double phi = 0.0;
  const mfg_status status = mfg_run(config, &phi);
  mfg_config_free(config);
  if (status != MFG_OK) return Report(status);
  std::printf("final_exploitability %.17g\n", phi);
  return 0;
}

int CmdCheckMonotone(const CommonFlags& flags) {
  mfg_config* config = nullptr;
  if (int code = LoadConfig(flags, &config); code != 0) return code;
  int violation = 0;
  char* json = nullptr;
  const mfg_status status = mfg_check_monotone(config, &violation, &json);
  mfg_config_free(config);
  if (status != MFG_OK) return Report(status);
  std::cout << json << "\n";
  if (!flags.out.empty()) {
    std::ofstream file(flags.out, std::ios::binary);
    file << json << "\n";
    if (!file) {
      mfg_string_free(json);
      std::cerr << "mfg: cannot write '" << flags.out << "'\n";
      return 2;
    }
  }
  mfg_string_free(json);
  return violation ? kExitMonotonicityViolation : 0;
}

int CmdEstimateMemory(const std::string& preset, const std::string& algorithm,
                      int scalar_bytes) {
  char* json = nullptr;
  const mfg_status status = mfg_estimate_memory(
      preset.c_str(), algorithm.c_str(), scalar_bytes, &json);
  if (status != MFG_OK) return Report(status);
  std::cout << json << "\n";
  mfg_string_free(json);
  return 0;
}

int CmdExport(const CommonFlags& flags, const std::string& flow,
              int iteration) {
  CommonFlags load = flags;
  load.out.clear();
  mfg_config* config = nullptr;
  if (int code = LoadConfig(load, &config); code != 0) return code;
  const mfg_status status =
      mfg_export(config, flow.c_str(), iteration, flags.out.c_str());
  mfg_config_free(config);
  if (status != MFG_OK) return Report(status);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean field game solvers: OMD and fictitious play", "mfg"};
  app.set_version_flag("--version", std::string(mfg_version()));
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run an experiment");
  AddCommonFlags(run, run_flags);
  run->add_option("--out", run_flags.out, "Output directory");
  run->add_option("--algorithm", run_flags.algorithm,
                  "omd, fp_decreasing, fp_damped or fixed_point");
  run->add_flag("--reproducible", run_flags.reproducible,
                "Zero timings and fixed manifest timestamps");

  CommonFlags mono_flags;
  CLI::App* mono = app.add_subcommand(
      "check-monotone", "Sample the weak monotonicity condition");
  AddCommonFlags(mono, mono_flags);
  mono->add_option("--out", mono_flags.out, "Also write the report here");

  std::string mem_preset;
  std::string mem_algorithm = "omd";
  int scalar_bytes = 4;
  CLI::App* mem =
      app.add_subcommand("estimate-memory", "Solver memory for a preset");
  mem->add_option("--preset", mem_preset, "Full-scale or desk preset")
      ->required();
  mem->add_option("--algorithm", mem_algorithm, "omd or fp");
  mem->add_option("--scalar-bytes", scalar_bytes, "Bytes per stored number");

  CommonFlags export_flags;
  std::string flow_path;
  int iteration = 0;
  CLI::App* exp = app.add_subcommand("export", "Heatmaps from a flow CSV");
  AddCommonFlags(exp, export_flags);
  exp->add_option("--flow", flow_path, "flow_final.csv from a run")
      ->required();
  exp->add_option("--out", export_flags.out, "Output directory")->required();
  exp->add_option("--iteration", iteration, "Iteration tag for file names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) return CmdRun(run_flags);
  if (mono->parsed()) return CmdCheckMonotone(mono_flags);
  if (mem->parsed()) {
    return CmdEstimateMemory(mem_preset, mem_algorithm, scalar_bytes);
  }
  if (exp->parsed()) return CmdExport(export_flags, flow_path, iteration);
  return 2;
}
