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

// C interface of the mfg shared library. Objects are opaque handles owned by
// the caller and released with the matching *_free function. Every call
// returns an mfg_status; on failure mfg_last_error() describes the problem
// (thread-local, valid until the next failing call on the same thread).
// Strings returned through char** are released with mfg_string_free.

#ifndef MFG_C_API_H_
#define MFG_C_API_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MFG_API __declspec(dllexport)
#else
#define MFG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mfg_status {
  MFG_OK = 0,
  MFG_ERR_DIMENSION = 1,
  MFG_ERR_PARAMETER = 2,
  MFG_ERR_DOMAIN = 3,
  MFG_ERR_NUMERIC = 4,
  MFG_ERR_NUMERIC_CONSISTENCY = 5,
  MFG_ERR_STRUCTURE = 6,
  MFG_ERR_CONFIG = 7,
  MFG_ERR_IO = 8,
  MFG_ERR_INVALID_ARGUMENT = 9,
  MFG_ERR_INTERNAL = 10
} mfg_status;

typedef struct mfg_config mfg_config;
typedef struct mfg_game mfg_game;
typedef struct mfg_policy mfg_policy;
typedef struct mfg_flow mfg_flow;

MFG_API const char* mfg_version(void);
MFG_API const char* mfg_last_error(void);
MFG_API const char* mfg_status_name(mfg_status status);
// Process exit code of the command line tool for a status:
// 0 ok, 2 config or input error, 3 numeric error.
MFG_API int mfg_exit_code(mfg_status status);
MFG_API void mfg_string_free(char* text);

// ---------------------------------------------------------------- configs

MFG_API mfg_status mfg_config_load(const char* path, mfg_config** out);
MFG_API mfg_status mfg_config_parse(const char* text, mfg_config** out);
// Minimal config for a desk preset with default algorithm settings.
MFG_API mfg_status mfg_config_from_preset(const char* preset,
                                          mfg_config** out);
MFG_API void mfg_config_free(mfg_config* config);

// Overrides; each re-validates the config.
MFG_API mfg_status mfg_config_set_seed(mfg_config* config, uint64_t seed);
MFG_API mfg_status mfg_config_set_preset(mfg_config* config,
                                         const char* preset);
MFG_API mfg_status mfg_config_set_output(mfg_config* config,
                                         const char* dir);
MFG_API mfg_status mfg_config_set_algorithm(mfg_config* config,
                                            const char* name);
MFG_API mfg_status mfg_config_set_reproducible(mfg_config* config,
                                               int reproducible);

// ------------------------------------------------------------ experiments

// Runs the experiment and writes its files. `final_exploitability` (may be
// NULL) receives the mean final exploitability over seeds.
MFG_API mfg_status mfg_run(const mfg_config* config,
                           double* final_exploitability);

// Samples the monotonicity condition. `violation` is set to 1 when the
// worst value exceeds the tolerance. `report_json` may be NULL.
MFG_API mfg_status mfg_check_monotone(const mfg_config* config,
                                      int* violation, char** report_json);

// `preset` is a full-scale preset (building, common_noise, ...) or a desk
// preset; `algorithm` is "omd" or "fp" (or any FP variant name).
MFG_API mfg_status mfg_estimate_memory(const char* preset,
                                       const char* algorithm,
                                       int scalar_bytes, char** json);

// Converts a flow CSV written by mfg_run into heatmaps in `out_dir`.
MFG_API mfg_status mfg_export(const mfg_config* config, const char* flow_csv,
                              int iteration, const char* out_dir);

// ------------------------------------------------------------- low level

MFG_API mfg_status mfg_game_from_preset(const char* preset, uint64_t seed,
                                        mfg_game** out);
MFG_API mfg_status mfg_game_from_config(const mfg_config* config,
                                        uint64_t seed, mfg_game** out);
MFG_API void mfg_game_free(mfg_game* game);
// Policy/flow tables have `slots` entries per population: horizon + 1 for
// plain games, one per noise-tree node otherwise.
MFG_API mfg_status mfg_game_dims(const mfg_game* game, int* num_states,
                                 int* num_actions, int* horizon,
                                 int* num_populations, int* slots);

MFG_API mfg_status mfg_policy_uniform(const mfg_game* game, mfg_policy** out);
// Layout [population][slot][state][action].
MFG_API mfg_status mfg_policy_from_values(const mfg_game* game,
                                          const double* values, size_t count,
                                          mfg_policy** out);
MFG_API mfg_status mfg_policy_values(const mfg_policy* policy, double* out,
                                     size_t count);
MFG_API void mfg_policy_free(mfg_policy* policy);

MFG_API mfg_status mfg_forward_flow(const mfg_game* game,
                                    const mfg_policy* policy, mfg_flow** out);
// Layout [population][slot][state].
MFG_API mfg_status mfg_flow_values(const mfg_flow* flow, double* out,
                                   size_t count);
MFG_API void mfg_flow_free(mfg_flow* flow);

MFG_API mfg_status mfg_exploitability(const mfg_game* game,
                                      const mfg_policy* policy,
                                      double* total);

// Runs `iterations` updates of `algorithm` from the uniform policy and
// returns the final policy (average policy for FP variants).
MFG_API mfg_status mfg_solve(const mfg_game* game, const char* algorithm,
                             double learning_rate, int iterations,
                             mfg_policy** out, double* final_exploitability);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // MFG_C_API_H_
