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

// The deterministic building blocks: forward propagation of the population,
// backward evaluation of a policy, best response and exploitability.
//
// All functions are pure; inputs can be shared across threads.

#ifndef MFG_DYNAMICS_H_
#define MFG_DYNAMICS_H_

#include <vector>

#include "mfg/game.h"
#include "mfg/tables.h"

namespace mfg {

// Tolerance below zero tolerated for an exploitability term.
inline constexpr double kExploitabilityTolerance = 1e-9;
// Agreement required between the two routes to J.
inline constexpr double kTotalRewardTolerance = 1e-8;

struct BestResponseResult {
  QFunction q;    // best-responding Q; v holds max_a Q
  Policy policy;  // single population, deterministic argmax
};

struct ExploitabilityResult {
  double total = 0.0;
  std::vector<double> per_population;
};

// mu^i_{n+1}(x') = sum_{x,a} pi^i_n(a|x) p(x'|x,a) mu^i_n(x).
DistributionFlow ForwardFlow(const GameSpec& spec, const Policy& policy);

// Backward equations for Q^{i,pi,mu} against an arbitrary flow `flow`.
QFunction EvaluatePolicy(const GameSpec& spec, int pop, const Policy& policy,
                         const DistributionFlow& flow);

// J^i(pi^i, mu). Computed through the value function and through the
// occupancy of pi^i; throws kNumericConsistency if they disagree.
double TotalReward(const GameSpec& spec, int pop, const Policy& policy,
                   const DistributionFlow& flow);

// Argmax ties go to the lowest action index.
BestResponseResult BestResponse(const GameSpec& spec, int pop,
                                const DistributionFlow& flow);

ExploitabilityResult Exploitability(const GameSpec& spec, const Policy& policy);

Occupancy ComputeOccupancy(const Policy& policy, const DistributionFlow& flow);

// View of mu at one slot over all populations.
JointDistribution JointAt(const DistributionFlow& flow, int slot);

// sum_x mu0(x) v(x).
double InitialValue(std::span<const double> mu0, std::span<const double> v);

// Index of the first maximum.
int ArgmaxLowest(std::span<const double> row);

void CheckPolicyShape(const GameSpec& spec, const Policy& policy);
void CheckFlowShape(const GameSpec& spec, const DistributionFlow& flow);

}  // namespace mfg

#endif  // MFG_DYNAMICS_H_
