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

#include "mfg/c_api.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <functional>
#include <memory>
#include <new>
#include <string>

#include "mfg/diagnostics.h"
#include "mfg/environments.h"
#include "mfg/errors.h"
#include "mfg/experiment.h"
#include "mfg/mirror.h"
#include "mfg/solvers.h"

struct mfg_config {
  mfg::ExperimentConfig config;
};

struct mfg_game {
  mfg::Environment env;
  std::unique_ptr<mfg::GameModel> model;
};

struct mfg_policy {
  mfg::Policy policy;
};

struct mfg_flow {
  mfg::DistributionFlow flow;
};

namespace {

thread_local std::string last_error;

mfg_status StatusFor(mfg::ErrorCode code) {
  switch (code) {
    case mfg::ErrorCode::kDimension: return MFG_ERR_DIMENSION;
    case mfg::ErrorCode::kParameter: return MFG_ERR_PARAMETER;
    case mfg::ErrorCode::kDomain: return MFG_ERR_DOMAIN;
    case mfg::ErrorCode::kNumeric: return MFG_ERR_NUMERIC;
    case mfg::ErrorCode::kNumericConsistency:
      return MFG_ERR_NUMERIC_CONSISTENCY;
    case mfg::ErrorCode::kStructure: return MFG_ERR_STRUCTURE;
    case mfg::ErrorCode::kConfig: return MFG_ERR_CONFIG;
    case mfg::ErrorCode::kIo: return MFG_ERR_IO;
  }
  return MFG_ERR_INTERNAL;
}

template <typename Fn>
mfg_status Guard(Fn&& fn) {
  try {
    fn();
    return MFG_OK;
  } catch (const mfg::Error& e) {
    last_error = e.what();
    return StatusFor(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MFG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MFG_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return MFG_ERR_INTERNAL;
  }
}

mfg_status Invalid(const char* what) {
  last_error = what;
  return MFG_ERR_INVALID_ARGUMENT;
}

mfg_status CountMismatch(const char* what) {
  last_error = what;
  return MFG_ERR_DIMENSION;
}

char* CopyString(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mfg_status Reinterpret(mfg_config* config,
                       const std::function<void(mfg::ConfigDocument&)>& edit) {
  return Guard([&] {
    mfg::ConfigDocument doc = config->config.document;
    edit(doc);
    config->config = mfg::InterpretConfig(std::move(doc));
  });
}

void AttachModel(mfg_game* game) {
  if (game->env.noise) {
    game->model = std::make_unique<mfg::NoiseModel>(*game->env.noise);
  } else {
    game->model = std::make_unique<mfg::PlainModel>(game->env.spec);
  }
}

}  // namespace

extern "C" {

const char* mfg_version(void) { return mfg::kVersion; }

const char* mfg_last_error(void) { return last_error.c_str(); }

const char* mfg_status_name(mfg_status status) {
  switch (status) {
    case MFG_OK: return "ok";
    case MFG_ERR_DIMENSION: return "dimension_error";
    case MFG_ERR_PARAMETER: return "parameter_error";
    case MFG_ERR_DOMAIN: return "domain_error";
    case MFG_ERR_NUMERIC: return "numeric_error";
    case MFG_ERR_NUMERIC_CONSISTENCY: return "numeric_consistency_error";
    case MFG_ERR_STRUCTURE: return "structure_error";
    case MFG_ERR_CONFIG: return "config_error";
    case MFG_ERR_IO: return "io_error";
    case MFG_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case MFG_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

int mfg_exit_code(mfg_status status) {
  switch (status) {
    case MFG_OK: return 0;
    case MFG_ERR_DOMAIN:
    case MFG_ERR_NUMERIC:
    case MFG_ERR_NUMERIC_CONSISTENCY:
      return 3;
    case MFG_ERR_INTERNAL: return 1;
    default: return 2;
  }
}

void mfg_string_free(char* text) { delete[] text; }

mfg_status mfg_config_load(const char* path, mfg_config** out) {
  if (path == nullptr || out == nullptr) return Invalid("null argument");
  return Guard([&] {
    *out = new mfg_config{mfg::LoadExperimentConfig(path)};
  });
}

mfg_status mfg_config_parse(const char* text, mfg_config** out) {
  if (text == nullptr || out == nullptr) return Invalid("null argument");
  return Guard([&] {
    *out = new mfg_config{mfg::ParseExperimentConfig(text)};
  });
}

mfg_status mfg_config_from_preset(const char* preset, mfg_config** out) {
  if (preset == nullptr || out == nullptr) return Invalid("null argument");
  return Guard([&] {
    mfg::ConfigDocument doc;
    doc.Set("environment", "preset", mfg::MakeString(preset));
    *out = new mfg_config{mfg::InterpretConfig(std::move(doc))};
  });
}

void mfg_config_free(mfg_config* config) { delete config; }

mfg_status mfg_config_set_seed(mfg_config* config, uint64_t seed) {
  if (config == nullptr) return Invalid("null config");
  if (seed > static_cast<uint64_t>(INT64_MAX)) return Invalid("seed too large");
  return Reinterpret(config, [&](mfg::ConfigDocument& doc) {
    doc.Erase("seeds", "sweep");
    doc.Set("seeds", "seed", mfg::MakeInt(static_cast<std::int64_t>(seed)));
  });
}

mfg_status mfg_config_set_preset(mfg_config* config, const char* preset) {
  if (config == nullptr || preset == nullptr) return Invalid("null argument");
  return Reinterpret(config, [&](mfg::ConfigDocument& doc) {
    for (const auto& [name, entries] : doc.sections()) {
      if (name != "environment") continue;
      std::vector<std::string> keys;
      for (const auto& entry : entries) keys.push_back(entry.first);
      for (const std::string& key : keys) doc.Erase("environment", key);
      break;
    }
    doc.Set("environment", "preset", mfg::MakeString(preset));
  });
}

mfg_status mfg_config_set_output(mfg_config* config, const char* dir) {
  if (config == nullptr || dir == nullptr) return Invalid("null argument");
  return Reinterpret(config, [&](mfg::ConfigDocument& doc) {
    doc.Set("output", "dir", mfg::MakeString(dir));
  });
}

mfg_status mfg_config_set_algorithm(mfg_config* config, const char* name) {
  if (config == nullptr || name == nullptr) return Invalid("null argument");
  return Reinterpret(config, [&](mfg::ConfigDocument& doc) {
    doc.Set("algorithm", "name", mfg::MakeString(name));
  });
}

mfg_status mfg_config_set_reproducible(mfg_config* config, int reproducible) {
  if (config == nullptr) return Invalid("null config");
  return Reinterpret(config, [&](mfg::ConfigDocument& doc) {
    doc.Set("output", "reproducible", mfg::MakeBool(reproducible != 0));
  });
}

mfg_status mfg_run(const mfg_config* config, double* final_exploitability) {
  if (config == nullptr) return Invalid("null config");
  return Guard([&] {
    const mfg::RunSummary summary = mfg::RunExperiment(config->config);
    if (final_exploitability != nullptr) {
      double mean = 0.0;
      for (double v : summary.final_exploitability) mean += v;
      *final_exploitability =
          mean / static_cast<double>(summary.final_exploitability.size());
    }
  });
}

mfg_status mfg_check_monotone(const mfg_config* config, int* violation,
                              char** report_json) {
  if (config == nullptr || violation == nullptr) {
    return Invalid("null argument");
  }
  return Guard([&] {
    const mfg::MonotonicityReport report = mfg::CheckMonotone(config->config);
    *violation = report.passed() ? 0 : 1;
    if (report_json != nullptr) {
      *report_json = CopyString(mfg::MonotonicityReportJson(report));
    }
  });
}

mfg_status mfg_estimate_memory(const char* preset, const char* algorithm,
                               int scalar_bytes, char** json) {
  if (preset == nullptr || algorithm == nullptr || json == nullptr) {
    return Invalid("null argument");
  }
  return Guard([&] {
    const std::string name = preset;
    bool full_scale = false;
    for (const mfg::MemoryPreset& p : mfg::MemoryPresets()) {
      full_scale = full_scale || p.name == name;
    }
    const mfg::MemoryEstimate estimate =
        full_scale
            ? mfg::EstimateMemory(name, algorithm, scalar_bytes)
            : mfg::EstimateMemory(mfg::BuildDeskPreset(name, 0).spec,
                                  algorithm, scalar_bytes);
    *json = CopyString(mfg::MemoryEstimateJson(estimate));
  });
}

mfg_status mfg_export(const mfg_config* config, const char* flow_csv,
                      int iteration, const char* out_dir) {
  if (config == nullptr || flow_csv == nullptr || out_dir == nullptr) {
    return Invalid("null argument");
  }
  return Guard([&] {
    const mfg::ExperimentConfig& c = config->config;
    const mfg::Environment env = mfg::BuildEnvironment(c, c.seeds.front());
    const mfg::NoiseTree* tree = env.noise ? &env.noise->tree : nullptr;
    std::ifstream in(flow_csv, std::ios::binary);
    if (!in) {
      mfg::Fail(mfg::ErrorCode::kIo,
                std::string("cannot read '") + flow_csv + "'");
    }
    const mfg::DistributionFlow flow =
        mfg::ReadFlowCsv(in, env.spec.num_populations, env.spec.num_states,
                         tree, env.spec.horizon);
    mfg::ExportSnapshot(flow, env.spec.layout, tree, iteration,
                        c.snapshot_timesteps, out_dir);
  });
}

mfg_status mfg_game_from_preset(const char* preset, uint64_t seed,
                                mfg_game** out) {
  if (preset == nullptr || out == nullptr) return Invalid("null argument");
  return Guard([&] {
    auto game = std::make_unique<mfg_game>();
    game->env = mfg::BuildDeskPreset(preset, seed);
    AttachModel(game.get());
    *out = game.release();
  });
}

mfg_status mfg_game_from_config(const mfg_config* config, uint64_t seed,
                                mfg_game** out) {
  if (config == nullptr || out == nullptr) return Invalid("null argument");
  return Guard([&] {
    auto game = std::make_unique<mfg_game>();
    game->env = mfg::BuildEnvironment(config->config, seed);
    AttachModel(game.get());
    *out = game.release();
  });
}

void mfg_game_free(mfg_game* game) { delete game; }

mfg_status mfg_game_dims(const mfg_game* game, int* num_states,
                         int* num_actions, int* horizon, int* num_populations,
                         int* slots) {
  if (game == nullptr) return Invalid("null game");
  const mfg::GameSpec& spec = game->env.spec;
  if (num_states) *num_states = spec.num_states;
  if (num_actions) *num_actions = spec.num_actions;
  if (horizon) *horizon = spec.horizon;
  if (num_populations) *num_populations = spec.num_populations;
  if (slots) *slots = game->model->policy_shape().num_slots;
  return MFG_OK;
}

mfg_status mfg_policy_uniform(const mfg_game* game, mfg_policy** out) {
  if (game == nullptr || out == nullptr) return Invalid("null argument");
  return Guard([&] {
    *out = new mfg_policy{game->model->UniformPolicy()};
  });
}

mfg_status mfg_policy_from_values(const mfg_game* game, const double* values,
                                  size_t count, mfg_policy** out) {
  if (game == nullptr || values == nullptr || out == nullptr) {
    return Invalid("null argument");
  }
  return Guard([&] {
    const mfg::TableShape s = game->model->policy_shape();
    mfg::Policy policy(s.num_populations, s.num_slots, s.num_states,
                       s.num_actions);
    if (count != policy.values().size()) {
      mfg::Fail(mfg::ErrorCode::kDimension, "policy value count mismatch");
    }
    std::copy(values, values + count, policy.values().begin());
    policy.Validate();
    *out = new mfg_policy{std::move(policy)};
  });
}

mfg_status mfg_policy_values(const mfg_policy* policy, double* out,
                             size_t count) {
  if (policy == nullptr || out == nullptr) return Invalid("null argument");
  const auto values = policy->policy.values();
  if (count != values.size()) return CountMismatch("policy value count mismatch");
  std::copy(values.begin(), values.end(), out);
  return MFG_OK;
}

void mfg_policy_free(mfg_policy* policy) { delete policy; }

mfg_status mfg_forward_flow(const mfg_game* game, const mfg_policy* policy,
                            mfg_flow** out) {
  if (game == nullptr || policy == nullptr || out == nullptr) {
    return Invalid("null argument");
  }
  return Guard([&] {
    *out = new mfg_flow{game->model->Flow(policy->policy)};
  });
}

mfg_status mfg_flow_values(const mfg_flow* flow, double* out, size_t count) {
  if (flow == nullptr || out == nullptr) return Invalid("null argument");
  const auto values = flow->flow.values();
  if (count != values.size()) return CountMismatch("flow value count mismatch");
  std::copy(values.begin(), values.end(), out);
  return MFG_OK;
}

void mfg_flow_free(mfg_flow* flow) { delete flow; }

mfg_status mfg_exploitability(const mfg_game* game, const mfg_policy* policy,
                              double* total) {
  if (game == nullptr || policy == nullptr || total == nullptr) {
    return Invalid("null argument");
  }
  return Guard([&] { *total = game->model->Exploit(policy->policy).total; });
}

mfg_status mfg_solve(const mfg_game* game, const char* algorithm,
                     double learning_rate, int iterations, mfg_policy** out,
                     double* final_exploitability) {
  if (game == nullptr || algorithm == nullptr || out == nullptr) {
    return Invalid("null argument");
  }
  return Guard([&] {
    mfg::SolverConfig config;
    config.algorithm = mfg::ParseAlgorithm(algorithm);
    config.learning_rate = learning_rate;
    config.max_iterations = iterations;
    config.exploitability_every = iterations > 0 ? iterations : 1;
    const mfg::EntropyRegularizer reg;
    mfg::SolverRun run = mfg::Solve(*game->model, reg, config);
    if (final_exploitability != nullptr) {
      *final_exploitability =
          run.records.empty() ? game->model->Exploit(run.final_policy).total
                              : run.records.back().phi_total;
    }
    *out = new mfg_policy{std::move(run.final_policy)};
  });
}

}  // extern "C"
