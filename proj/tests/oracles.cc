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

#include "oracles.h"

#include <cmath>
#include <functional>
#include <memory>
#include <random>

namespace mfg::oracle {
namespace {

std::vector<double> RandomSimplex(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& v : p) {
    v = u(rng);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

TransitionKernel RandomKernel(std::mt19937_64& rng, int num_states,
                              int num_actions) {
  std::vector<std::vector<Successor>> rows;
  for (int x = 0; x < num_states; ++x) {
    for (int a = 0; a < num_actions; ++a) {
      const std::vector<double> p = RandomSimplex(rng, num_states);
      std::vector<Successor> row;
      for (int y = 0; y < num_states; ++y) row.push_back({y, p[y]});
      rows.push_back(std::move(row));
    }
  }
  return TransitionKernel(num_states, num_actions, rows);
}

JointDistribution Joint(const DistributionFlow& flow, int slot) {
  std::vector<std::span<const double>> spans;
  for (int i = 0; i < flow.num_populations(); ++i) {
    spans.push_back(flow.Slice(i, slot));
  }
  return JointDistribution(std::move(spans));
}

int Sample(std::mt19937_64& rng, std::span<const double> p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng);
  for (std::size_t k = 0; k < p.size(); ++k) {
    r -= p[k];
    if (r < 0.0) return static_cast<int>(k);
  }
  for (std::size_t k = p.size(); k-- > 0;) {
    if (p[k] > 0.0) return static_cast<int>(k);
  }
  return 0;
}

int SampleSuccessor(std::mt19937_64& rng, std::span<const Successor> row) {
  std::vector<double> p;
  for (const Successor& s : row) p.push_back(s.probability);
  return row[Sample(rng, p)].next_state;
}

class TableConditionalReward : public ConditionalRewardModel {
 public:
  TableConditionalReward(std::vector<double> base, int num_states,
                         int num_actions, double eta)
      : base_(std::move(base)),
        num_states_(num_states),
        num_actions_(num_actions),
        eta_(eta) {}

  double Reward(int pop, int time, int variant, int x, int a,
                const JointDistribution& mu) const override {
    const double b =
        base_[(static_cast<std::size_t>(variant) * num_states_ + x) *
                  num_actions_ +
              a];
    return b + 0.1 * time - eta_ * std::log(std::max(mu(pop, x), 1e-30)) +
           0.5 * mu(pop, x) * mu(pop, x);
  }

 private:
  std::vector<double> base_;
  int num_states_;
  int num_actions_;
  double eta_;
};

}  // namespace

GameSpec RandomGame(std::uint64_t seed, int num_states, int num_actions,
                    int horizon, int num_populations) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GameSpec spec;
  spec.name = "oracle_random";
  spec.num_states = num_states;
  spec.num_actions = num_actions;
  spec.horizon = horizon;
  spec.num_populations = num_populations;
  spec.transition = RandomKernel(rng, num_states, num_actions);
  std::vector<double> base(static_cast<std::size_t>(num_populations) *
                           (horizon + 1) * num_states * num_actions);
  for (double& b : base) b = u(rng);
  std::vector<double> coupling(static_cast<std::size_t>(num_populations) *
                               num_populations);
  for (double& c : coupling) c = u(rng);
  spec.reward = std::make_shared<FunctionReward>(
      [=](int pop, int time, int x, int a, const JointDistribution& mu) {
        const double b =
            base[((static_cast<std::size_t>(pop) * (horizon + 1) + time) *
                      num_states +
                  x) *
                     num_actions +
                 a];
        double r = b - std::log(std::max(mu(pop, x), 1e-30)) +
                   0.3 * std::sin(3.0 * mu(pop, x));
        for (int j = 0; j < mu.num_populations(); ++j) {
          r += coupling[pop * num_populations + j] * mu(j, x);
        }
        return r;
      });
  for (int i = 0; i < num_populations; ++i) {
    spec.initial_distributions.push_back(RandomSimplex(rng, num_states));
  }
  spec.layout = GridLayout{1, 1, num_states};
  return spec;
}

Policy RandomPolicy(std::uint64_t seed, int num_populations, int num_slots,
                    int num_states, int num_actions) {
  std::mt19937_64 rng(seed);
  Policy policy(num_populations, num_slots, num_states, num_actions);
  for (int i = 0; i < num_populations; ++i) {
    for (int n = 0; n < num_slots; ++n) {
      for (int x = 0; x < num_states; ++x) {
        const std::vector<double> p = RandomSimplex(rng, num_actions);
        std::copy(p.begin(), p.end(), policy.Row(i, n, x).begin());
      }
    }
  }
  return policy;
}

DistributionFlow EnumeratedFlow(const GameSpec& spec, const Policy& policy) {
  DistributionFlow flow(spec.num_populations, spec.horizon + 1,
                        spec.num_states);
  for (int i = 0; i < spec.num_populations; ++i) {
    std::function<void(int, int, double)> walk = [&](int n, int x,
                                                     double prob) {
      flow(i, n, x) += prob;
      if (n == spec.horizon) return;
      for (int a = 0; a < spec.num_actions; ++a) {
        for (const Successor& s : spec.transition.Row(x, a)) {
          walk(n + 1, s.next_state,
               prob * policy(i, n, x, a) * s.probability);
        }
      }
    };
    for (int x = 0; x < spec.num_states; ++x) {
      walk(0, x, spec.initial_distributions[i][x]);
    }
  }
  return flow;
}

double EnumeratedQ(const GameSpec& spec, int pop, const Policy& policy,
                   const DistributionFlow& flow, int time, int x, int a) {
  double total = 0.0;
  // Sum over every continuation path of prob * (sum of rewards on it).
  std::function<void(int, int, int, double, double)> walk =
      [&](int n, int state, int action, double prob, double acc) {
        acc += spec.reward->Reward(pop, n, state, action, Joint(flow, n));
        if (n == spec.horizon) {
          total += prob * acc;
          return;
        }
        for (const Successor& s : spec.transition.Row(state, action)) {
          for (int b = 0; b < spec.num_actions; ++b) {
            const double p =
                prob * s.probability * policy(pop, n + 1, s.next_state, b);
            if (p == 0.0) continue;
            walk(n + 1, s.next_state, b, p, acc);
          }
        }
      };
  walk(time, x, a, 1.0, 0.0);
  return total;
}

double EnumeratedTotalReward(const GameSpec& spec, int pop,
                             const Policy& policy,
                             const DistributionFlow& flow) {
  double total = 0.0;
  for (int x = 0; x < spec.num_states; ++x) {
    for (int a = 0; a < spec.num_actions; ++a) {
      const double p = spec.initial_distributions[pop][x] * policy(pop, 0, x, a);
      if (p == 0.0) continue;
      total += p * EnumeratedQ(spec, pop, policy, flow, 0, x, a);
    }
  }
  return total;
}

double ExhaustiveBestValue(const GameSpec& spec, int pop,
                           const DistributionFlow& flow,
                           std::uint64_t* policies_tried) {
  const int cells = (spec.horizon + 1) * spec.num_states;
  std::vector<int> choice(cells, 0);
  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t tried = 0;
  Policy policy(spec.num_populations, spec.horizon + 1, spec.num_states,
                spec.num_actions);
  while (true) {
    std::fill(policy.values().begin(), policy.values().end(), 0.0);
    for (int c = 0; c < cells; ++c) {
      policy(pop, c / spec.num_states, c % spec.num_states, choice[c]) = 1.0;
    }
    best = std::max(best, EnumeratedTotalReward(spec, pop, policy, flow));
    ++tried;
    int c = 0;
    while (c < cells && ++choice[c] == spec.num_actions) choice[c++] = 0;
    if (c == cells) break;
  }
  if (policies_tried != nullptr) *policies_tried = tried;
  return best;
}

DistributionFlow MonteCarloFlow(const GameSpec& spec, const Policy& policy,
                                int num_trajectories, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DistributionFlow counts(spec.num_populations, spec.horizon + 1,
                          spec.num_states);
  for (int i = 0; i < spec.num_populations; ++i) {
    for (int k = 0; k < num_trajectories; ++k) {
      int x = Sample(rng, spec.initial_distributions[i]);
      for (int n = 0; n <= spec.horizon; ++n) {
        counts(i, n, x) += 1.0;
        if (n == spec.horizon) break;
        const int a = Sample(rng, policy.Row(i, n, x));
        x = SampleSuccessor(rng, spec.transition.Row(x, a));
      }
    }
  }
  for (double& v : counts.values()) v /= num_trajectories;
  return counts;
}

NoiseGame RandomNoiseGame(std::uint64_t seed, int num_states, int num_actions,
                          int horizon, int fanout) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  constexpr int kVariants = 3;
  NoiseGame game;
  game.spec = RandomGame(seed ^ 0x9e3779b97f4a7c15ULL, num_states, num_actions,
                         horizon);
  std::vector<TransitionKernel> kernels;
  for (int k = 0; k < fanout; ++k) {
    kernels.push_back(RandomKernel(rng, num_states, num_actions));
  }
  std::uniform_int_distribution<int> variant(0, kVariants - 1);
  std::vector<std::vector<NoiseNode>> levels(horizon + 1);
  levels[0].push_back(NoiseNode{});
  for (int n = 0; n <= horizon; ++n) {
    for (int k = 0; k < static_cast<int>(levels[n].size()); ++k) {
      const std::vector<double> p = RandomSimplex(rng, fanout);
      for (int b = 0; b < fanout; ++b) {
        NoiseBranch branch;
        branch.probability = p[b];
        branch.kernel = b;
        branch.variant = variant(rng);
        if (n < horizon) {
          branch.child = static_cast<int>(levels[n + 1].size());
          levels[n + 1].push_back(NoiseNode{k, {}});
        }
        levels[n][k].branches.push_back(branch);
      }
    }
  }
  game.tree = NoiseTree(std::move(levels), std::move(kernels));
  std::vector<double> base(static_cast<std::size_t>(kVariants) * num_states *
                           num_actions);
  for (double& b : base) b = u(rng);
  game.reward = std::make_shared<TableConditionalReward>(
      std::move(base), num_states, num_actions, 0.7);
  return game;
}

DistributionFlow EnumeratedConditionalFlow(const NoiseGame& game,
                                           const Policy& policy) {
  const GameSpec& spec = game.spec;
  const NoiseTree& tree = game.tree;
  DistributionFlow flow(spec.num_populations, tree.total_nodes(),
                        spec.num_states);
  for (int i = 0; i < spec.num_populations; ++i) {
    std::function<void(int, int, int, double)> walk = [&](int n, int k, int x,
                                                          double prob) {
      const int slot = tree.Slot(n, k);
      flow(i, slot, x) += prob;
      if (n == tree.horizon()) return;
      for (const NoiseBranch& b : tree.node(n, k).branches) {
        for (int a = 0; a < spec.num_actions; ++a) {
          for (const Successor& s : tree.kernel(b.kernel).Row(x, a)) {
            // Conditional on the branch: its probability is not applied.
            walk(n + 1, b.child, s.next_state,
                 prob * policy(i, slot, x, a) * s.probability);
          }
        }
      }
    };
    for (int x = 0; x < spec.num_states; ++x) {
      walk(0, 0, x, spec.initial_distributions[i][x]);
    }
  }
  return flow;
}

double EnumeratedConditionalValue(const NoiseGame& game, int pop,
                                  const Policy& policy,
                                  const DistributionFlow& flow) {
  const GameSpec& spec = game.spec;
  const NoiseTree& tree = game.tree;
  double total = 0.0;
  std::function<void(int, int, int, double, double)> walk =
      [&](int n, int k, int x, double prob, double acc) {
        const int slot = tree.Slot(n, k);
        const JointDistribution mu = Joint(flow, slot);
        for (int a = 0; a < spec.num_actions; ++a) {
          const double pa = prob * policy(pop, slot, x, a);
          if (pa == 0.0) continue;
          for (const NoiseBranch& b : tree.node(n, k).branches) {
            const double pb = pa * b.probability;
            const double r =
                acc + game.reward->Reward(pop, n, b.variant, x, a, mu);
            if (n == tree.horizon()) {
              total += pb * r;
              continue;
            }
            for (const Successor& s : tree.kernel(b.kernel).Row(x, a)) {
              walk(n + 1, b.child, s.next_state, pb * s.probability, r);
            }
          }
        }
      };
  for (int x = 0; x < spec.num_states; ++x) {
    walk(0, 0, x, spec.initial_distributions[pop][x], 0.0);
  }
  return total;
}

double ExhaustiveConditionalBestValue(const NoiseGame& game, int pop,
                                      const DistributionFlow& flow) {
  const GameSpec& spec = game.spec;
  const int cells = game.tree.total_nodes() * spec.num_states;
  std::vector<int> choice(cells, 0);
  double best = -std::numeric_limits<double>::infinity();
  Policy policy(spec.num_populations, game.tree.total_nodes(), spec.num_states,
                spec.num_actions);
  while (true) {
    std::fill(policy.values().begin(), policy.values().end(), 0.0);
    for (int c = 0; c < cells; ++c) {
      policy(pop, c / spec.num_states, c % spec.num_states, choice[c]) = 1.0;
    }
    best = std::max(best, EnumeratedConditionalValue(game, pop, policy, flow));
    int c = 0;
    while (c < cells && ++choice[c] == spec.num_actions) choice[c++] = 0;
    if (c == cells) break;
  }
  return best;
}

DistributionFlow MonteCarloConditionalFlow(const NoiseGame& game,
                                           const Policy& policy,
                                           int num_trajectories,
                                           std::uint64_t seed) {
  const GameSpec& spec = game.spec;
  const NoiseTree& tree = game.tree;
  std::mt19937_64 rng(seed);
  DistributionFlow counts(spec.num_populations, tree.total_nodes(),
                          spec.num_states);
  std::vector<double> visits(tree.total_nodes(), 0.0);
  for (int k = 0; k < num_trajectories; ++k) {
    int node = 0;
    int x = Sample(rng, spec.initial_distributions[0]);
    for (int n = 0; n <= tree.horizon(); ++n) {
      const int slot = tree.Slot(n, node);
      counts(0, slot, x) += 1.0;
      visits[slot] += 1.0;
      if (n == tree.horizon()) break;
      const auto& branches = tree.node(n, node).branches;
      std::vector<double> p;
      for (const NoiseBranch& b : branches) p.push_back(b.probability);
      const NoiseBranch& b = branches[Sample(rng, p)];
      const int a = Sample(rng, policy.Row(0, slot, x));
      x = SampleSuccessor(rng, tree.kernel(b.kernel).Row(x, a));
      node = b.child;
    }
  }
  for (int slot = 0; slot < tree.total_nodes(); ++slot) {
    for (int x = 0; x < spec.num_states; ++x) {
      if (visits[slot] > 0.0) counts(0, slot, x) /= visits[slot];
    }
  }
  return counts;
}

}  // namespace mfg::oracle
