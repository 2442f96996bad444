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

#include "mfg/diagnostics.h"

#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "mfg/dynamics.h"
#include "mfg/errors.h"
#include "mfg/parallel.h"

namespace mfg {
namespace {

using ConditionalFn = std::function<double(int pop, int time, int variant,
                                           int x, int a,
                                           const JointDistribution& mu)>;

std::vector<double> SampleSimplex(std::mt19937_64& rng, int size) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> p(size);
  double sum = 0.0;
  for (double& v : p) {
    v = exp1(rng);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<std::vector<double>> Marginals(
    const std::vector<std::vector<double>>& rho, int num_states,
    int num_actions) {
  std::vector<std::vector<double>> mu;
  for (const auto& r : rho) {
    std::vector<double> m(num_states, 0.0);
    for (int x = 0; x < num_states; ++x) {
      for (int a = 0; a < num_actions; ++a) m[x] += r[x * num_actions + a];
    }
    mu.push_back(std::move(m));
  }
  return mu;
}

JointDistribution View(const std::vector<std::vector<double>>& mu) {
  std::vector<std::span<const double>> spans;
  for (const auto& m : mu) spans.emplace_back(m);
  return JointDistribution(std::move(spans));
}

double PairSum(const ConditionalFn& reward, int num_states, int num_actions,
               int time, const MonotonicityPair& pair) {
  const auto mu = Marginals(pair.rho, num_states, num_actions);
  const auto mu_prime = Marginals(pair.rho_prime, num_states, num_actions);
  const JointDistribution joint = View(mu);
  const JointDistribution joint_prime = View(mu_prime);
  double total = 0.0;
  for (int i = 0; i < static_cast<int>(pair.rho.size()); ++i) {
    for (int x = 0; x < num_states; ++x) {
      for (int a = 0; a < num_actions; ++a) {
        const int k = x * num_actions + a;
        const double d_rho = pair.rho[i][k] - pair.rho_prime[i][k];
        const double d_r = reward(i, time, pair.variant, x, a, joint) -
                           reward(i, time, pair.variant, x, a, joint_prime);
        total += d_rho * d_r;
      }
    }
  }
  return total;
}

// draw(rng) returns (time, variant).
MonotonicityReport RunSampler(
    const ConditionalFn& reward, int num_populations, int num_states,
    int num_actions, int num_samples, std::uint64_t seed,
    const std::function<std::pair<int, int>(std::mt19937_64&)>& draw) {
  if (num_samples < 0) Fail(ErrorCode::kParameter, "negative sample count");
  std::vector<double> values(num_samples);
  const int cells = num_states * num_actions;
  auto make_pair = [&](int s) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    MonotonicityPair pair;
    std::tie(pair.time, pair.variant) = draw(rng);
    for (int i = 0; i < num_populations; ++i) {
      pair.rho.push_back(SampleSimplex(rng, cells));
    }
    for (int i = 0; i < num_populations; ++i) {
      pair.rho_prime.push_back(SampleSimplex(rng, cells));
    }
    return pair;
  };
  const int chunks = std::max(1, std::min(num_samples, MaxThreads()));
  ParallelFor(chunks, [&](int c) {
    for (int s = c; s < num_samples; s += chunks) {
      const MonotonicityPair pair = make_pair(s);
      values[s] = PairSum(reward, num_states, num_actions, pair.time, pair);
    }
  });

  MonotonicityReport report;
  report.samples = num_samples;
  report.worst = num_samples > 0 ? -std::numeric_limits<double>::infinity()
                                 : 0.0;
  int worst_index = -1;
  for (int s = 0; s < num_samples; ++s) {
    if (values[s] > report.worst) {
      report.worst = values[s];
      worst_index = s;
    }
  }
  if (report.passed()) {
    report.verdict = "no_violation_found";
  } else {
    report.verdict = "violation";
    report.violating_pair = make_pair(worst_index);
  }
  return report;
}

}  // namespace

MonotonicityReport CheckWeakMonotonicity(const GameSpec& spec,
                                         int num_samples, std::uint64_t seed) {
  spec.Validate();
  const RewardModel& model = *spec.reward;
  ConditionalFn reward = [&model](int pop, int time, int, int x, int a,
                                  const JointDistribution& mu) {
    return model.Reward(pop, time, x, a, mu);
  };
  const int horizon = spec.horizon;
  return RunSampler(reward, spec.num_populations, spec.num_states,
                    spec.num_actions, num_samples, seed,
                    [horizon](std::mt19937_64& rng) {
                      std::uniform_int_distribution<int> t(0, horizon);
                      return std::make_pair(t(rng), 0);
                    });
}

MonotonicityReport CheckWeakMonotonicity(const NoiseGame& game,
                                         int num_samples, std::uint64_t seed) {
  game.Validate();
  const ConditionalRewardModel& model = *game.reward;
  ConditionalFn reward = [&model](int pop, int time, int variant, int x, int a,
                                  const JointDistribution& mu) {
    return model.Reward(pop, time, variant, x, a, mu);
  };
  const NoiseTree& tree = game.tree;
  return RunSampler(
      reward, game.spec.num_populations, game.spec.num_states,
      game.spec.num_actions, num_samples, seed,
      [&tree](std::mt19937_64& rng) {
        std::uniform_int_distribution<int> t(0, tree.horizon());
        const int time = t(rng);
        std::uniform_int_distribution<int> k(0, tree.num_nodes(time) - 1);
        const auto& branches = tree.node(time, k(rng)).branches;
        std::uniform_int_distribution<int> b(
            0, static_cast<int>(branches.size()) - 1);
        return std::make_pair(time, branches[b(rng)].variant);
      });
}

double MonotonicitySum(const GameSpec& spec, int time,
                       const MonotonicityPair& pair) {
  const RewardModel& model = *spec.reward;
  ConditionalFn reward = [&model](int pop, int t, int, int x, int a,
                                  const JointDistribution& mu) {
    return model.Reward(pop, t, x, a, mu);
  };
  return PairSum(reward, spec.num_states, spec.num_actions, time, pair);
}

double TildeM(const GameSpec& spec, const Policy& pi, const Policy& pi_prime) {
  const DistributionFlow mu = ForwardFlow(spec, pi);
  const DistributionFlow mu_prime = ForwardFlow(spec, pi_prime);
  double total = 0.0;
  for (int i = 0; i < spec.num_populations; ++i) {
    const double own = TotalReward(spec, i, pi, mu) +
                       TotalReward(spec, i, pi_prime, mu_prime);
    const double cross = TotalReward(spec, i, pi, mu_prime) +
                         TotalReward(spec, i, pi_prime, mu);
    total += own - cross;
  }
  return total;
}

const std::vector<MemoryPreset>& MemoryPresets() {
  static const std::vector<MemoryPreset>* presets = [] {
    auto* p = new std::vector<MemoryPreset>;
    auto pow10 = [](int e) {
      BigCount v = 1;
      for (int i = 0; i < e; ++i) v *= 10;
      return v;
    };
    p->push_back({"garnet_small", 2 * pow10(3), 2 * pow10(4)});
    p->push_back({"garnet_large", 2 * pow10(4), 4 * pow10(5)});
    // 20 floors of 200 x 200 cells, 10^4 steps, 7 actions.
    p->push_back({"building", BigCount(20) * 200 * 200 * 10000,
                  BigCount(20) * 200 * 200 * 10000 * 7});
    // 1000 x 1000 positions, 200 steps, 1 + 4 + ... + 4^5 noise histories.
    p->push_back({"common_noise", BigCount(1000000) * 200 * 1365,
                  BigCount(1000000) * 200 * 1365 * 4});
    p->push_back({"multipop_medium", 5 * pow10(7), 2 * pow10(8)});
    p->push_back({"multipop_large", 8 * pow10(8), 32 * pow10(8)});
    return p;
  }();
  return *presets;
}

std::string FormatBinaryBytes(const BigCount& bytes) {
  static const char* kUnits[] = {"B", "KiB", "MiB", "GiB", "TiB", "PiB", "EiB"};
  long double value = bytes.convert_to<long double>();
  int unit = 0;
  while (value >= 1024.0L && unit < 6) {
    value /= 1024.0L;
    ++unit;
  }
  std::ostringstream out;
  if (unit == 0) {
    out << bytes << " B";
  } else {
    out << std::fixed << std::setprecision(2) << static_cast<double>(value)
        << ' ' << kUnits[unit];
  }
  return out.str();
}

MemoryEstimate EstimateMemory(const BigCount& state_count,
                              const BigCount& pair_count,
                              const std::string& algorithm,
                              int scalar_bytes) {
  if (scalar_bytes <= 0) Fail(ErrorCode::kParameter, "scalar_bytes <= 0");
  if (state_count < 0 || pair_count < 0) {
    Fail(ErrorCode::kParameter, "negative state or pair count");
  }
  MemoryEstimate e;
  if (algorithm == "omd") {
    e.algorithm = "omd";
  } else if (algorithm == "fp" || algorithm == "fp_decreasing" ||
             algorithm == "fp_damped" || algorithm == "fixed_point") {
    e.algorithm = "fp";
  } else {
    Fail(ErrorCode::kConfig, "unknown algorithm '" + algorithm + "'");
  }
  e.scalar_bytes = scalar_bytes;
  e.state_count = state_count;
  e.pair_count = pair_count;
  e.total_bytes = BigCount(scalar_bytes) * (pair_count + state_count);
  if (e.algorithm == "fp") e.total_bytes *= 2;
  e.human = FormatBinaryBytes(e.total_bytes);
  return e;
}

MemoryEstimate EstimateMemory(const std::string& preset,
                              const std::string& algorithm,
                              int scalar_bytes) {
  for (const MemoryPreset& p : MemoryPresets()) {
    if (p.name == preset) {
      return EstimateMemory(p.state_count, p.pair_count, algorithm,
                            scalar_bytes);
    }
  }
  Fail(ErrorCode::kConfig, "unknown memory preset '" + preset + "'");
}

MemoryEstimate EstimateMemory(const GameSpec& spec,
                              const std::string& algorithm,
                              int scalar_bytes) {
  const BigCount states = BigCount(spec.num_states) * spec.num_timesteps() *
                          spec.num_populations;
  return EstimateMemory(states, states * spec.num_actions, algorithm,
                        scalar_bytes);
}

double FitRate(const std::vector<double>& trace, double tail_fraction) {
  std::vector<double> t(trace.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i + 1);
  return FitRate(t, trace, tail_fraction);
}

double FitRate(const std::vector<double>& iterations,
               const std::vector<double>& trace, double tail_fraction) {
  if (iterations.size() != trace.size()) {
    Fail(ErrorCode::kDimension, "iterations and trace differ in length");
  }
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    Fail(ErrorCode::kParameter, "tail_fraction must be in (0, 1]");
  }
  const std::size_t n = trace.size();
  const std::size_t tail = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(tail_fraction * n)));
  if (n < 2) Fail(ErrorCode::kDimension, "need at least two points");
  const std::size_t begin = n - std::min(tail, n);
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = begin; i < n; ++i) {
    if (!(trace[i] > 0.0) || !(iterations[i] > 0.0)) {
      std::ostringstream msg;
      msg << "non-positive entry at index " << i;
      Fail(ErrorCode::kDomain, msg.str());
    }
    sx += std::log(iterations[i]);
    sy += std::log(trace[i]);
  }
  const double m = static_cast<double>(n - begin);
  const double mx = sx / m;
  const double my = sy / m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = begin; i < n; ++i) {
    const double dx = std::log(iterations[i]) - mx;
    sxy += dx * (std::log(trace[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) Fail(ErrorCode::kDomain, "degenerate iteration range");
  return sxy / sxx;
}

}  // namespace mfg
