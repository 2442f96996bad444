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

// Runtime checks of structural assumptions (weak monotonicity), memory
// accounting and convergence-rate fitting.

#ifndef MFG_DIAGNOSTICS_H_
#define MFG_DIAGNOSTICS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mfg/common_noise.h"
#include "mfg/game.h"
#include "mfg/tables.h"

namespace mfg {

inline constexpr double kMonotonicityTolerance = 1e-9;

// One sampled pair of occupancy tuples. rho[i] is population i's joint
// state-action distribution, flattened as x * |A| + a.
struct MonotonicityPair {
  int time = 0;
  int variant = 0;
  std::vector<std::vector<double>> rho;
  std::vector<std::vector<double>> rho_prime;
};

struct MonotonicityReport {
  int samples = 0;
  double worst = 0.0;
  std::optional<MonotonicityPair> violating_pair;
  // Sampling can only find violations, so a pass reads "no_violation_found".
  std::string verdict;

  bool passed() const { return worst <= kMonotonicityTolerance; }
};

// Draws `num_samples` pairs (rho, rho'), each population's rho uniform on the
// simplex over X x A, derives mu as the state marginal and evaluates
//   sum_i sum_{x,a} (rho^i - rho'^i)(x,a) (r^i(x,a,mu) - r^i(x,a,mu'))
// at a uniformly drawn time step. Reports the largest value found.
MonotonicityReport CheckWeakMonotonicity(const GameSpec& spec,
                                         int num_samples, std::uint64_t seed);

// Same check with the conditional reward; each sample also draws a tree
// node and one of its branch variants.
MonotonicityReport CheckWeakMonotonicity(const NoiseGame& game,
                                         int num_samples, std::uint64_t seed);

// Monotonicity sum of one pair at one time step.
double MonotonicitySum(const GameSpec& spec, int time,
                       const MonotonicityPair& pair);

// sum_i [J^i(pi, mu^pi) + J^i(pi', mu^pi') - J^i(pi, mu^pi') - J^i(pi', mu^pi)]
double TildeM(const GameSpec& spec, const Policy& pi, const Policy& pi_prime);

using BigCount = boost::multiprecision::cpp_int;

struct MemoryEstimate {
  std::string algorithm;  // "omd" or "fp"
  int scalar_bytes = 4;
  BigCount state_count;
  BigCount pair_count;
  BigCount total_bytes;
  std::string human;  // binary units, e.g. "238.42 GiB"

  double bytes() const { return total_bytes.convert_to<double>(); }
};

struct MemoryPreset {
  std::string name;
  BigCount state_count;
  BigCount pair_count;
};

// Full-scale state and pair counts of the reference experiments.
const std::vector<MemoryPreset>& MemoryPresets();

// OMD: s (|X||A| + |X|); FP: twice that. `algorithm` is "omd", "fp" or any
// solver name (fp_decreasing, fp_damped, fixed_point count as FP).
MemoryEstimate EstimateMemory(const BigCount& state_count,
                              const BigCount& pair_count,
                              const std::string& algorithm,
                              int scalar_bytes = 4);
MemoryEstimate EstimateMemory(const std::string& preset,
                              const std::string& algorithm,
                              int scalar_bytes = 4);
// Counts every (time, state) of the spec.
MemoryEstimate EstimateMemory(const GameSpec& spec,
                              const std::string& algorithm,
                              int scalar_bytes = 4);

std::string FormatBinaryBytes(const BigCount& bytes);

// Least-squares slope of log phi against log t over the final
// `tail_fraction` of the trace. Iterations default to 1..n.
double FitRate(const std::vector<double>& trace, double tail_fraction);
double FitRate(const std::vector<double>& iterations,
               const std::vector<double>& trace, double tail_fraction);

}  // namespace mfg

#endif  // MFG_DIAGNOSTICS_H_
