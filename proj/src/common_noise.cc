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

#include "mfg/common_noise.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfg/errors.h"
#include "mfg/parallel.h"

namespace mfg {
namespace {

void CheckConditionalShape(const NoiseGame& game, const Policy& policy) {
  const GameSpec& spec = game.spec;
  if (policy.num_populations() != spec.num_populations ||
      policy.num_slots() != game.tree.total_nodes() ||
      policy.num_states() != spec.num_states ||
      policy.num_actions() != spec.num_actions) {
    Fail(ErrorCode::kStructure, "conditional policy does not match the tree");
  }
}

void CheckConditionalShape(const NoiseGame& game,
                           const DistributionFlow& flow) {
  const GameSpec& spec = game.spec;
  if (flow.num_populations() != spec.num_populations ||
      flow.num_slots() != game.tree.total_nodes() ||
      flow.num_states() != spec.num_states) {
    Fail(ErrorCode::kStructure, "conditional flow does not match the tree");
  }
}

void PropagateConditional(const NoiseGame& game, const Policy& policy,
                          int pop, DistributionFlow& flow) {
  const GameSpec& spec = game.spec;
  const NoiseTree& tree = game.tree;
  const auto& mu0 = spec.initial_distributions[pop];
  std::copy(mu0.begin(), mu0.end(), flow.Slice(pop, tree.Slot(0, 0)).begin());
  for (int n = 0; n < tree.horizon(); ++n) {
    for (int k = 0; k < tree.num_nodes(n); ++k) {
      const int slot = tree.Slot(n, k);
      std::span<const double> current = flow.Slice(pop, slot);
      for (const NoiseBranch& branch : tree.node(n, k).branches) {
        const TransitionKernel& kernel = tree.kernel(branch.kernel);
        std::span<double> next = flow.Slice(pop, tree.Slot(n + 1, branch.child));
        for (int x = 0; x < spec.num_states; ++x) {
          const double mass = current[x];
          if (mass == 0.0) continue;
          std::span<const double> pi = policy.Row(pop, slot, x);
          for (int a = 0; a < spec.num_actions; ++a) {
            const double w = pi[a] * mass;
            if (w == 0.0) continue;
            for (const Successor& s : kernel.Row(x, a)) {
              next[s.next_state] += w * s.probability;
            }
          }
        }
      }
    }
  }
}

// Mirrors the plain backward pass operation for operation, so a
// single-branch tree reproduces it bit for bit.
QFunction ConditionalBackward(const NoiseGame& game, int pop,
                              const Policy* policy,
                              const DistributionFlow& flow,
                              Policy* argmax_policy) {
  const GameSpec& spec = game.spec;
  const NoiseTree& tree = game.tree;
  const int horizon = tree.horizon();
  QFunction q(tree.total_nodes(), spec.num_states, spec.num_actions);
  for (int n = horizon; n >= 0; --n) {
    for (int k = 0; k < tree.num_nodes(n); ++k) {
      const int slot = tree.Slot(n, k);
      const JointDistribution joint = JointAt(flow, slot);
      const auto& branches = tree.node(n, k).branches;
      for (int x = 0; x < spec.num_states; ++x) {
        for (int a = 0; a < spec.num_actions; ++a) {
          double value = 0.0;
          for (std::size_t b = 0; b < branches.size(); ++b) {
            const NoiseBranch& branch = branches[b];
            double term =
                game.reward->Reward(pop, n, branch.variant, x, a, joint);
            if (n < horizon) {
              const int child = tree.Slot(n + 1, branch.child);
              double continuation = 0.0;
              for (const Successor& s :
                   tree.kernel(branch.kernel).Row(x, a)) {
                continuation += s.probability * q.v(child, s.next_state);
              }
              term = term + continuation;
            }
            value = b == 0 ? branch.probability * term
                           : value + branch.probability * term;
          }
          q.q(slot, x, a) = value;
        }
        std::span<const double> row = q.QRow(slot, x);
        if (policy != nullptr) {
          std::span<const double> pi = policy->Row(pop, slot, x);
          double v = 0.0;
          for (int a = 0; a < spec.num_actions; ++a) v += pi[a] * row[a];
          q.v(slot, x) = v;
        } else {
          const int best = ArgmaxLowest(row);
          q.v(slot, x) = row[best];
          (*argmax_policy)(0, slot, x, best) = 1.0;
        }
      }
    }
  }
  return q;
}

}  // namespace

NoiseTree::NoiseTree(std::vector<std::vector<NoiseNode>> levels,
                     std::vector<TransitionKernel> kernels)
    : levels_(std::move(levels)), kernels_(std::move(kernels)) {
  if (levels_.empty()) Fail(ErrorCode::kStructure, "noise tree has no levels");
  slot_offsets_.reserve(levels_.size() + 1);
  slot_offsets_.push_back(0);
  for (const auto& level : levels_) {
    slot_offsets_.push_back(slot_offsets_.back() +
                            static_cast<int>(level.size()));
  }
}

NoiseTree NoiseTree::Degenerate(int horizon, TransitionKernel kernel) {
  std::vector<std::vector<NoiseNode>> levels(horizon + 1);
  for (int n = 0; n <= horizon; ++n) {
    NoiseNode node;
    node.parent = n == 0 ? -1 : 0;
    node.branches.push_back({1.0, 0, 0, n < horizon ? 0 : -1});
    levels[n].push_back(std::move(node));
  }
  std::vector<TransitionKernel> kernels;
  kernels.push_back(std::move(kernel));
  return NoiseTree(std::move(levels), std::move(kernels));
}

void NoiseTree::Validate(int num_states, int num_actions) const {
  if (levels_.front().size() != 1) {
    Fail(ErrorCode::kStructure, "noise tree needs exactly one root");
  }
  for (const TransitionKernel& k : kernels_) {
    if (k.num_states() != num_states || k.num_actions() != num_actions) {
      Fail(ErrorCode::kStructure, "noise kernel shape mismatch");
    }
    k.Validate();
  }
  const int last = horizon();
  for (int n = 0; n <= last; ++n) {
    std::vector<int> incoming(n < last ? num_nodes(n + 1) : 0, 0);
    for (int k = 0; k < num_nodes(n); ++k) {
      const NoiseNode& nd = node(n, k);
      if (nd.branches.empty()) {
        Fail(ErrorCode::kStructure, "noise node without branches");
      }
      double sum = 0.0;
      for (const NoiseBranch& b : nd.branches) {
        if (!(b.probability >= 0.0)) {
          Fail(ErrorCode::kStructure, "negative branch probability");
        }
        if (b.kernel < 0 || b.kernel >= num_kernels()) {
          Fail(ErrorCode::kStructure, "branch kernel index out of range");
        }
        sum += b.probability;
        if (n == last) {
          if (b.child != -1) {
            Fail(ErrorCode::kStructure, "terminal branch with a child");
          }
          continue;
        }
        if (b.child < 0 || b.child >= num_nodes(n + 1)) {
          Fail(ErrorCode::kStructure, "branch child out of range");
        }
        if (node(n + 1, b.child).parent != k) {
          Fail(ErrorCode::kStructure, "child/parent link mismatch");
        }
        ++incoming[b.child];
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "branch probabilities at depth " << n << " node " << k
            << " sum to " << sum;
        Fail(ErrorCode::kStructure, msg.str());
      }
    }
    for (int c : incoming) {
      if (c != 1) Fail(ErrorCode::kStructure, "node reached by != 1 branch");
    }
  }
}

NoiseGame NoiseGame::Degenerate(const GameSpec& spec) {
  NoiseGame game;
  game.spec = spec;
  game.tree = NoiseTree::Degenerate(spec.horizon, spec.transition);
  game.reward = std::make_shared<PlainRewardAdapter>(spec.reward);
  return game;
}

void NoiseGame::Validate() const {
  spec.Validate();
  if (!reward) Fail(ErrorCode::kStructure, "noise game without reward");
  if (tree.horizon() != spec.horizon) {
    Fail(ErrorCode::kStructure, "tree depth must be horizon + 1");
  }
  tree.Validate(spec.num_states, spec.num_actions);
}

ConditionalPolicy UniformConditionalPolicy(const NoiseGame& game) {
  return Policy::Uniform(game.spec.num_populations, game.tree.total_nodes(),
                         game.spec.num_states, game.spec.num_actions);
}

ConditionalFlow ConditionalForwardFlow(const NoiseGame& game,
                                       const ConditionalPolicy& policy) {
  CheckConditionalShape(game, policy);
  DistributionFlow flow(game.spec.num_populations, game.tree.total_nodes(),
                        game.spec.num_states);
  ParallelFor(game.spec.num_populations, [&](int pop) {
    PropagateConditional(game, policy, pop, flow);
  });
  return flow;
}

ConditionalQ ConditionalEvaluate(const NoiseGame& game, int pop,
                                 const ConditionalPolicy& policy,
                                 const ConditionalFlow& flow) {
  CheckConditionalShape(game, policy);
  CheckConditionalShape(game, flow);
  return ConditionalBackward(game, pop, &policy, flow, nullptr);
}

BestResponseResult ConditionalBestResponse(const NoiseGame& game, int pop,
                                           const ConditionalFlow& flow) {
  CheckConditionalShape(game, flow);
  Policy policy(1, game.tree.total_nodes(), game.spec.num_states,
                game.spec.num_actions);
  QFunction q = ConditionalBackward(game, pop, nullptr, flow, &policy);
  return {std::move(q), std::move(policy)};
}

double ConditionalTotalReward(const NoiseGame& game, int pop,
                              const ConditionalPolicy& policy,
                              const ConditionalFlow& flow) {
  const QFunction q = ConditionalEvaluate(game, pop, policy, flow);
  return InitialValue(game.spec.initial_distributions[pop],
                      q.VSlice(game.tree.Slot(0, 0)));
}

ExploitabilityResult ConditionalExploitability(
    const NoiseGame& game, const ConditionalPolicy& policy) {
  const ConditionalFlow flow = ConditionalForwardFlow(game, policy);
  const int root = game.tree.Slot(0, 0);
  ExploitabilityResult result;
  result.per_population.assign(game.spec.num_populations, 0.0);
  ParallelFor(game.spec.num_populations, [&](int pop) {
    const auto& mu0 = game.spec.initial_distributions[pop];
    const double current = InitialValue(
        mu0, ConditionalEvaluate(game, pop, policy, flow).VSlice(root));
    const double best = InitialValue(
        mu0, ConditionalBestResponse(game, pop, flow).q.VSlice(root));
    result.per_population[pop] = best - current;
  });
  for (int pop = 0; pop < game.spec.num_populations; ++pop) {
    const double phi = result.per_population[pop];
    if (!(phi >= -kExploitabilityTolerance)) {
      std::ostringstream msg;
      msg << "conditional exploitability of population " << pop << " is "
          << phi;
      Fail(ErrorCode::kNumericConsistency, msg.str());
    }
    result.total += phi;
  }
  return result;
}

std::uint64_t AugmentedStateCount(const NoiseTree& tree,
                                  std::uint64_t positions) {
  std::uint64_t total = 0;
  for (int n = 0; n <= tree.horizon(); ++n) {
    total += static_cast<std::uint64_t>(tree.num_nodes(n)) * positions;
  }
  return total;
}

}  // namespace mfg
