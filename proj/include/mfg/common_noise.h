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

// Games driven by a common noise sequence shared by every agent.
//
// The noise histories form a finite tree: depth n holds the histories of
// length n. At a node of depth n the noise xi_n is drawn from the node's
// branches; the reward and transition of step n use that branch, while the
// policy at step n only sees the node (the history before xi_n).
//
// Conditional tables reuse the plain tables with one slot per tree node,
// laid out depth by depth (see NoiseTree::Slot).

#ifndef MFG_COMMON_NOISE_H_
#define MFG_COMMON_NOISE_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "mfg/dynamics.h"
#include "mfg/game.h"
#include "mfg/tables.h"

namespace mfg {

struct NoiseBranch {
  double probability = 1.0;
  int kernel = 0;   // index into NoiseTree::kernels()
  int variant = 0;  // reward variant, interpreted by the reward model
  int child = -1;   // node index at depth + 1; -1 at the last depth
};

struct NoiseNode {
  int parent = -1;  // node index at depth - 1
  std::vector<NoiseBranch> branches;
};

class NoiseTree {
 public:
  NoiseTree() = default;
  NoiseTree(std::vector<std::vector<NoiseNode>> levels,
            std::vector<TransitionKernel> kernels);

  // One node per depth with a single probability-1 branch using `kernel`.
  static NoiseTree Degenerate(int horizon, TransitionKernel kernel);

  int horizon() const { return static_cast<int>(levels_.size()) - 1; }
  int num_nodes(int depth) const {
    return static_cast<int>(levels_[depth].size());
  }
  int total_nodes() const { return slot_offsets_.back(); }
  int Slot(int depth, int node) const { return slot_offsets_[depth] + node; }

  const NoiseNode& node(int depth, int index) const {
    return levels_[depth][index];
  }
  const TransitionKernel& kernel(int index) const { return kernels_[index]; }
  int num_kernels() const { return static_cast<int>(kernels_.size()); }

  // Branch probabilities, child links and kernel shapes; throws kStructure.
  void Validate(int num_states, int num_actions) const;

 private:
  std::vector<std::vector<NoiseNode>> levels_;
  std::vector<TransitionKernel> kernels_;
  std::vector<int> slot_offsets_;
};

// r^i(x, a, mu, xi), where the branch is identified by its reward variant.
class ConditionalRewardModel {
 public:
  virtual ~ConditionalRewardModel() = default;
  virtual double Reward(int pop, int time, int variant, int x, int a,
                        const JointDistribution& mu) const = 0;
};

// Ignores the variant and forwards to a plain reward.
class PlainRewardAdapter : public ConditionalRewardModel {
 public:
  explicit PlainRewardAdapter(std::shared_ptr<const RewardModel> reward)
      : reward_(std::move(reward)) {}

  double Reward(int pop, int time, int, int x, int a,
                const JointDistribution& mu) const override {
    return reward_->Reward(pop, time, x, a, mu);
  }

 private:
  std::shared_ptr<const RewardModel> reward_;
};

// Dimensions and initial distributions come from `spec`; its own transition
// and reward describe the noise-free variant of the game.
struct NoiseGame {
  GameSpec spec;
  NoiseTree tree;
  std::shared_ptr<const ConditionalRewardModel> reward;

  // The plain game seen as a single-branch tree.
  static NoiseGame Degenerate(const GameSpec& spec);

  void Validate() const;
};

using ConditionalPolicy = Policy;
using ConditionalFlow = DistributionFlow;
using ConditionalQ = QFunction;

ConditionalPolicy UniformConditionalPolicy(const NoiseGame& game);

ConditionalFlow ConditionalForwardFlow(const NoiseGame& game,
                                       const ConditionalPolicy& policy);

ConditionalQ ConditionalEvaluate(const NoiseGame& game, int pop,
                                 const ConditionalPolicy& policy,
                                 const ConditionalFlow& flow);

BestResponseResult ConditionalBestResponse(const NoiseGame& game, int pop,
                                           const ConditionalFlow& flow);

// Noise-averaged J^i: sum_x mu^i_0(x) V^i_0(x | root).
double ConditionalTotalReward(const NoiseGame& game, int pop,
                              const ConditionalPolicy& policy,
                              const ConditionalFlow& flow);

ExploitabilityResult ConditionalExploitability(const NoiseGame& game,
                                               const ConditionalPolicy& policy);

// sum_n (#nodes at depth n) * positions.
std::uint64_t AugmentedStateCount(const NoiseTree& tree,
                                  std::uint64_t positions);

}  // namespace mfg

#endif  // MFG_COMMON_NOISE_H_
