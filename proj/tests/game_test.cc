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

#include <cmath>

#include "gtest/gtest.h"
#include "oracles.h"
#include "test_util.h"

namespace mfg {
namespace {

TransitionKernel TwoStateKernel(double p) {
  return TransitionKernel(2, 1, {{{0, p}, {1, 1.0 - p}}, {{1, 1.0}}});
}

TEST(TransitionKernelTest, RowsAreCompressed) {
  const TransitionKernel k = TwoStateKernel(0.25);
  EXPECT_EQ(k.num_entries(), 3u);
  ASSERT_EQ(k.Row(0, 0).size(), 2u);
  EXPECT_EQ(k.Row(0, 0)[1], (Successor{1, 0.75}));
  EXPECT_EQ(k.Row(1, 0).size(), 1u);
  EXPECT_NO_THROW(k.Validate());
}

TEST(TransitionKernelTest, ValidationErrors) {
  EXPECT_MFG_ERROR(TwoStateKernel(1.5).Validate(), ErrorCode::kParameter);
  EXPECT_MFG_ERROR(TransitionKernel(2, 1, {{{0, 0.5}}, {{1, 1.0}}}).Validate(),
                   ErrorCode::kParameter);
  EXPECT_MFG_ERROR(TransitionKernel(2, 1, {{{2, 1.0}}, {{1, 1.0}}}).Validate(),
                   ErrorCode::kParameter);
  EXPECT_MFG_ERROR(TransitionKernel(2, 1, {{{0, 1.0}}}), ErrorCode::kDimension);
  EXPECT_MFG_ERROR(TransitionKernel(0, 1, {}), ErrorCode::kParameter);
}

TEST(CrowdAversionTest, FloorsTinyProbabilities) {
  EXPECT_DOUBLE_EQ(CrowdAversion(0.5), std::log(2.0));
  EXPECT_DOUBLE_EQ(CrowdAversion(0.0), -std::log(kFloorEpsilon));
  EXPECT_TRUE(std::isfinite(CrowdAversion(0.0)));
}

TEST(RewardModelTest, SeparableDefaultsRequireOverrides) {
  const FunctionReward r([](int pop, int time, int x, int a,
                            const JointDistribution& mu) {
    return pop + 10.0 * time + 100.0 * x + 1000.0 * a + mu(pop, x);
  });
  std::vector<double> m{0.25, 0.75};
  const JointDistribution mu({std::span<const double>(m)});
  EXPECT_DOUBLE_EQ(r.Reward(0, 2, 1, 1, mu), 1120.75);
  EXPECT_FALSE(r.separable());
  EXPECT_MFG_ERROR(r.BaseReward(0, 0, 0, 0), ErrorCode::kParameter);
}

TEST(GameSpecTest, ValidationErrors) {
  const GameSpec good = oracle::RandomGame(1, 3, 2, 2, 2);
  EXPECT_NO_THROW(good.Validate());
  GameSpec s = good;
  s.initial_distributions.pop_back();
  EXPECT_MFG_ERROR(s.Validate(), ErrorCode::kDimension);
  s = good;
  s.initial_distributions[0] = {0.5, 0.5, 0.5};
  EXPECT_MFG_ERROR(s.Validate(), ErrorCode::kParameter);
  s = good;
  s.initial_distributions[1] = {1.0, 0.0};
  EXPECT_MFG_ERROR(s.Validate(), ErrorCode::kDimension);
  s = good;
  s.initial_distributions[1] = {1.5, -0.5, 0.0};
  EXPECT_MFG_ERROR(s.Validate(), ErrorCode::kParameter);
  s = good;
  s.num_actions = 3;
  EXPECT_MFG_ERROR(s.Validate(), ErrorCode::kDimension);
  s = good;
  s.reward = nullptr;
  EXPECT_MFG_ERROR(s.Validate(), ErrorCode::kParameter);
  s = good;
  s.horizon = -1;
  EXPECT_MFG_ERROR(s.Validate(), ErrorCode::kParameter);
  EXPECT_EQ(good.num_timesteps(), 3);
}

}  // namespace
}  // namespace mfg
