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

#include "mfg/game.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfg/errors.h"

namespace mfg {

double CrowdAversion(double mu) { return -std::log(std::max(mu, kFloorEpsilon)); }

TransitionKernel::TransitionKernel(
    int num_states, int num_actions,
    const std::vector<std::vector<Successor>>& rows)
    : num_states_(num_states), num_actions_(num_actions) {
  if (num_states <= 0 || num_actions <= 0) {
    Fail(ErrorCode::kParameter, "transition kernel needs states and actions");
  }
  if (rows.size() != static_cast<std::size_t>(num_states) * num_actions) {
    Fail(ErrorCode::kDimension, "transition kernel: wrong number of rows");
  }
  offsets_.reserve(rows.size() + 1);
  offsets_.push_back(0);
  for (const auto& row : rows) {
    entries_.insert(entries_.end(), row.begin(), row.end());
    offsets_.push_back(entries_.size());
  }
}

void TransitionKernel::Validate(double tol) const {
  for (int x = 0; x < num_states_; ++x) {
    for (int a = 0; a < num_actions_; ++a) {
      double sum = 0.0;
      for (const Successor& s : Row(x, a)) {
        if (s.next_state < 0 || s.next_state >= num_states_) {
          std::ostringstream msg;
          msg << "successor " << s.next_state << " of (" << x << "," << a
              << ") out of range";
          Fail(ErrorCode::kParameter, msg.str());
        }
        if (!(s.probability >= 0.0)) {
          Fail(ErrorCode::kParameter, "negative transition probability");
        }
        sum += s.probability;
      }
      if (std::abs(sum - 1.0) > tol) {
        std::ostringstream msg;
        msg << "transition row (" << x << "," << a << ") sums to " << sum;
        Fail(ErrorCode::kParameter, msg.str());
      }
    }
  }
}

double RewardModel::Reward(int pop, int time, int x, int a,
                           const JointDistribution& mu) const {
  return BaseReward(pop, time, x, a) + CrowdTerm(pop, time, x, mu);
}

double RewardModel::BaseReward(int, int, int, int) const {
  Fail(ErrorCode::kParameter, "reward model does not declare a base term");
}

double RewardModel::CrowdTerm(int, int, int, const JointDistribution&) const {
  Fail(ErrorCode::kParameter, "reward model does not declare a crowd term");
}

void GameSpec::Validate() const {
  if (num_states <= 0 || num_actions <= 0 || horizon < 0 ||
      num_populations <= 0) {
    Fail(ErrorCode::kParameter, "game dimensions must be positive");
  }
  if (!reward) Fail(ErrorCode::kParameter, "game has no reward model");
  if (transition.num_states() != num_states ||
      transition.num_actions() != num_actions) {
    Fail(ErrorCode::kDimension, "transition kernel shape mismatch");
  }
  transition.Validate();
  if (initial_distributions.size() !=
      static_cast<std::size_t>(num_populations)) {
    Fail(ErrorCode::kDimension, "one initial distribution per population");
  }
  for (const auto& mu0 : initial_distributions) {
    if (mu0.size() != static_cast<std::size_t>(num_states)) {
      Fail(ErrorCode::kDimension, "initial distribution size mismatch");
    }
    double sum = 0.0;
    for (double m : mu0) {
      if (!(m >= 0.0)) {
        Fail(ErrorCode::kParameter, "negative initial probability");
      }
      sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      Fail(ErrorCode::kParameter, "initial distribution does not sum to 1");
    }
  }
}

}  // namespace mfg
