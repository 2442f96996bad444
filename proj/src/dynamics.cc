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

#include "mfg/dynamics.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfg/errors.h"
#include "mfg/parallel.h"

namespace mfg {
namespace {

void PropagatePopulation(const GameSpec& spec, const Policy& policy, int pop,
                         DistributionFlow& flow) {
  const auto& mu0 = spec.initial_distributions[pop];
  std::copy(mu0.begin(), mu0.end(), flow.Slice(pop, 0).begin());
  for (int n = 0; n < spec.horizon; ++n) {
    std::span<const double> current = flow.Slice(pop, n);
    std::span<double> next = flow.Slice(pop, n + 1);
    for (int x = 0; x < spec.num_states; ++x) {
      const double mass = current[x];
      if (mass == 0.0) continue;
      std::span<const double> pi = policy.Row(pop, n, x);
      for (int a = 0; a < spec.num_actions; ++a) {
        const double w = pi[a] * mass;
        if (w == 0.0) continue;
        for (const Successor& s : spec.transition.Row(x, a)) {
          next[s.next_state] += w * s.probability;
        }
      }
    }
  }
}

// Shared backward pass. With a null `policy` the value is max_a Q and the
// argmax is written into `argmax_policy` (best response).
QFunction Backward(const GameSpec& spec, int pop, const Policy* policy,
                   const DistributionFlow& flow, Policy* argmax_policy) {
  const int horizon = spec.horizon;
  QFunction q(spec.num_timesteps(), spec.num_states, spec.num_actions);
  for (int n = horizon; n >= 0; --n) {
    const JointDistribution joint = JointAt(flow, n);
    for (int x = 0; x < spec.num_states; ++x) {
      for (int a = 0; a < spec.num_actions; ++a) {
        double value = spec.reward->Reward(pop, n, x, a, joint);
        if (n < horizon) {
          double continuation = 0.0;
          for (const Successor& s : spec.transition.Row(x, a)) {
            continuation += s.probability * q.v(n + 1, s.next_state);
          }
          value = value + continuation;
        }
        q.q(n, x, a) = value;
      }
      std::span<const double> row = q.QRow(n, x);
      if (policy != nullptr) {
        std::span<const double> pi = policy->Row(pop, n, x);
        double v = 0.0;
        for (int a = 0; a < spec.num_actions; ++a) v += pi[a] * row[a];
        q.v(n, x) = v;
      } else {
        const int best = ArgmaxLowest(row);
        q.v(n, x) = row[best];
        (*argmax_policy)(0, n, x, best) = 1.0;
      }
    }
  }
  return q;
}

}  // namespace

void CheckPolicyShape(const GameSpec& spec, const Policy& policy) {
  if (policy.num_populations() != spec.num_populations ||
      policy.num_slots() != spec.num_timesteps() ||
      policy.num_states() != spec.num_states ||
      policy.num_actions() != spec.num_actions) {
    Fail(ErrorCode::kDimension, "policy shape does not match game");
  }
}

void CheckFlowShape(const GameSpec& spec, const DistributionFlow& flow) {
  if (flow.num_populations() != spec.num_populations ||
      flow.num_slots() != spec.num_timesteps() ||
      flow.num_states() != spec.num_states) {
    Fail(ErrorCode::kDimension, "flow shape does not match game");
  }
}

JointDistribution JointAt(const DistributionFlow& flow, int slot) {
  std::vector<std::span<const double>> pops;
  pops.reserve(flow.num_populations());
  for (int i = 0; i < flow.num_populations(); ++i) {
    pops.push_back(flow.Slice(i, slot));
  }
  return JointDistribution(std::move(pops));
}

int ArgmaxLowest(std::span<const double> row) {
  int best = 0;
  for (int a = 1; a < static_cast<int>(row.size()); ++a) {
    if (row[a] > row[best]) best = a;
  }
  return best;
}

double InitialValue(std::span<const double> mu0, std::span<const double> v) {
  double total = 0.0;
  for (std::size_t x = 0; x < mu0.size(); ++x) total += mu0[x] * v[x];
  return total;
}

DistributionFlow ForwardFlow(const GameSpec& spec, const Policy& policy) {
  CheckPolicyShape(spec, policy);
  DistributionFlow flow(spec.num_populations, spec.num_timesteps(),
                        spec.num_states);
  ParallelFor(spec.num_populations,
              [&](int pop) { PropagatePopulation(spec, policy, pop, flow); });
  return flow;
}

QFunction EvaluatePolicy(const GameSpec& spec, int pop, const Policy& policy,
                         const DistributionFlow& flow) {
  CheckPolicyShape(spec, policy);
  CheckFlowShape(spec, flow);
  return Backward(spec, pop, &policy, flow, nullptr);
}

double TotalReward(const GameSpec& spec, int pop, const Policy& policy,
                   const DistributionFlow& flow) {
  const QFunction q = EvaluatePolicy(spec, pop, policy, flow);
  const double by_value =
      InitialValue(spec.initial_distributions[pop], q.VSlice(0));

  // Occupancy route: the representative agent's own state distribution
  // is the forward flow of pi^i, whatever mu the rewards are read from.
  DistributionFlow own(spec.num_populations, spec.num_timesteps(),
                       spec.num_states);
  PropagatePopulation(spec, policy, pop, own);
  double by_occupancy = 0.0;
  for (int n = 0; n <= spec.horizon; ++n) {
    const JointDistribution joint = JointAt(flow, n);
    for (int x = 0; x < spec.num_states; ++x) {
      const double mass = own(pop, n, x);
      if (mass == 0.0) continue;
      std::span<const double> pi = policy.Row(pop, n, x);
      for (int a = 0; a < spec.num_actions; ++a) {
        if (pi[a] == 0.0) continue;
        by_occupancy +=
            mass * pi[a] * spec.reward->Reward(pop, n, x, a, joint);
      }
    }
  }
  if (!(std::abs(by_value - by_occupancy) <= kTotalRewardTolerance)) {
    std::ostringstream msg;
    msg << "total_reward: value route " << by_value << " vs occupancy route "
        << by_occupancy << " for population " << pop;
    Fail(ErrorCode::kNumericConsistency, msg.str());
  }
  return by_value;
}

BestResponseResult BestResponse(const GameSpec& spec, int pop,
                                const DistributionFlow& flow) {
  CheckFlowShape(spec, flow);
  Policy policy(1, spec.num_timesteps(), spec.num_states, spec.num_actions);
  QFunction q = Backward(spec, pop, nullptr, flow, &policy);
  return {std::move(q), std::move(policy)};
}

ExploitabilityResult Exploitability(const GameSpec& spec,
                                    const Policy& policy) {
  const DistributionFlow flow = ForwardFlow(spec, policy);
  ExploitabilityResult result;
  result.per_population.assign(spec.num_populations, 0.0);
  ParallelFor(spec.num_populations, [&](int pop) {
    const auto& mu0 = spec.initial_distributions[pop];
    const double current =
        InitialValue(mu0, EvaluatePolicy(spec, pop, policy, flow).VSlice(0));
    const double best =
        InitialValue(mu0, BestResponse(spec, pop, flow).q.VSlice(0));
    result.per_population[pop] = best - current;
  });
  for (int pop = 0; pop < spec.num_populations; ++pop) {
    const double phi = result.per_population[pop];
    if (!(phi >= -kExploitabilityTolerance)) {
      std::ostringstream msg;
      msg << "exploitability of population " << pop << " is " << phi;
      Fail(ErrorCode::kNumericConsistency, msg.str());
    }
    result.total += phi;
  }
  return result;
}

Occupancy ComputeOccupancy(const Policy& policy, const DistributionFlow& flow) {
  if (policy.num_populations() != flow.num_populations() ||
      policy.num_slots() != flow.num_slots() ||
      policy.num_states() != flow.num_states()) {
    Fail(ErrorCode::kDimension, "occupancy: policy/flow shape mismatch");
  }
  Occupancy rho(policy.num_populations(), policy.num_slots(),
                policy.num_states(), policy.num_actions());
  for (int i = 0; i < policy.num_populations(); ++i) {
    for (int s = 0; s < policy.num_slots(); ++s) {
      for (int x = 0; x < policy.num_states(); ++x) {
        const double mass = flow(i, s, x);
        for (int a = 0; a < policy.num_actions(); ++a) {
          rho(i, s, x, a) = mass * policy(i, s, x, a);
        }
      }
    }
  }
  return rho;
}

}  // namespace mfg
