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

#ifndef MFG_GAME_H_
#define MFG_GAME_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mfg {

// Lower bound applied to probabilities before taking a logarithm.
inline constexpr double kFloorEpsilon = 1e-30;

// -log(max(mu, kFloorEpsilon)).
double CrowdAversion(double mu);

struct Successor {
  int next_state;
  double probability;

  bool operator==(const Successor&) const = default;
};

// Sparse p(x'|x, a), stored row-compressed per (state, action) pair.
class TransitionKernel {
 public:
  TransitionKernel() = default;
  // rows[x * num_actions + a] lists the successors of (x, a).
  TransitionKernel(int num_states, int num_actions,
                   const std::vector<std::vector<Successor>>& rows);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  std::span<const Successor> Row(int x, int a) const {
    const std::size_t r = static_cast<std::size_t>(x) * num_actions_ + a;
    return {entries_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
  }

  std::size_t num_entries() const { return entries_.size(); }

  // Throws kParameter on out-of-range successors, negative probabilities or
  // rows that do not sum to 1 within `tol`.
  void Validate(double tol = 1e-12) const;

  bool operator==(const TransitionKernel&) const = default;

 private:
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Successor> entries_;
};

// Read-only view of mu_n across all populations.
class JointDistribution {
 public:
  JointDistribution() = default;
  explicit JointDistribution(std::vector<std::span<const double>> populations)
      : populations_(std::move(populations)) {}

  int num_populations() const { return static_cast<int>(populations_.size()); }
  double operator()(int pop, int x) const { return populations_[pop][x]; }
  std::span<const double> population(int pop) const {
    return populations_[pop];
  }

 private:
  std::vector<std::span<const double>> populations_;
};

// r^i(x, a, mu_n). Implementations must be deterministic.
//
// A reward may declare the separable form r = base(x, a) + crowd(x, mu);
// bundled environments all do.
class RewardModel {
 public:
  virtual ~RewardModel() = default;

  virtual double Reward(int pop, int time, int x, int a,
                        const JointDistribution& mu) const;

  virtual bool separable() const { return false; }
  virtual double BaseReward(int pop, int time, int x, int a) const;
  virtual double CrowdTerm(int pop, int time, int x,
                           const JointDistribution& mu) const;
};

// Wraps an arbitrary callable; mostly for tests and ad hoc games.
class FunctionReward : public RewardModel {
 public:
  using Fn = std::function<double(int pop, int time, int x, int a,
                                  const JointDistribution& mu)>;
  explicit FunctionReward(Fn fn) : fn_(std::move(fn)) {}

  double Reward(int pop, int time, int x, int a,
                const JointDistribution& mu) const override {
    return fn_(pop, time, x, a, mu);
  }

 private:
  Fn fn_;
};

// How flat state indices map onto images for snapshot export.
struct GridLayout {
  int floors = 1;
  int rows = 1;
  int cols = 1;

  int num_cells() const { return floors * rows * cols; }
  bool operator==(const GridLayout&) const = default;
};

struct GameSpec {
  std::string name;
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;  // timesteps 0..horizon inclusive
  int num_populations = 1;
  TransitionKernel transition;
  std::shared_ptr<const RewardModel> reward;
  std::vector<std::vector<double>> initial_distributions;
  GridLayout layout;

  int num_timesteps() const { return horizon + 1; }

  // Checks all structural invariants; throws kParameter / kDimension.
  void Validate() const;
};

}  // namespace mfg

#endif  // MFG_GAME_H_
