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

#include "gtest/gtest.h"
#include "mfg/dynamics.h"
#include "mfg/environments.h"
#include "oracles.h"
#include "test_util.h"

namespace mfg {
namespace {

TEST(MonotonicityTest, GarnetHasNoViolation) {
  GarnetParams p;
  p.n_x = 12;
  p.n_a = 3;
  p.horizon = 4;
  const MonotonicityReport r = CheckWeakMonotonicity(BuildGarnet(p), 2000, 1);
  EXPECT_EQ(r.samples, 2000);
  EXPECT_TRUE(r.passed());
  EXPECT_LT(r.worst, 0.0);
  EXPECT_EQ(r.verdict, "no_violation_found");
  EXPECT_FALSE(r.violating_pair.has_value());
}

TEST(MonotonicityTest, CrowdSeekingGridViolates) {
  GridTopology t;
  t.width = 4;
  t.height = 4;
  const GameSpec spec = BuildGrid(t, -1.0, 3);
  const MonotonicityReport r = CheckWeakMonotonicity(spec, 200, 2);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.verdict, "violation");
  ASSERT_TRUE(r.violating_pair.has_value());
  EXPECT_NEAR(MonotonicitySum(spec, r.violating_pair->time, *r.violating_pair),
              r.worst, 1e-12);
}

TEST(MonotonicityTest, MuIndependentRewardIsBorderline) {
  const GameSpec spec = BuildGrid(GridTopology::Donut(6, 6, -1.0), 0.0, 3);
  const MonotonicityReport r = CheckWeakMonotonicity(spec, 500, 3);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(std::abs(r.worst), 1e-12);
}

TEST(MonotonicityTest, AntisymmetricCouplingPasses) {
  ChasingParams p;
  p.num_populations = 4;
  p.topology.width = 5;
  p.topology.height = 5;
  p.horizon = 2;
  const MonotonicityReport r = CheckWeakMonotonicity(BuildChasing(p), 500, 4);
  EXPECT_TRUE(r.passed());
}

TEST(MonotonicityTest, NoiseGameUsesBranchVariants) {
  BeachBarParams p;
  p.side = 5;
  p.shift_period = 2;
  p.num_shifts = 1;
  const MonotonicityReport r =
      CheckWeakMonotonicity(BuildBeachBarNoise(p), 500, 5);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.samples, 500);
}

TEST(MonotonicityTest, DeterministicForSeed) {
  const GameSpec spec = oracle::RandomGame(3, 4, 2, 3);
  const MonotonicityReport a = CheckWeakMonotonicity(spec, 300, 77);
  const MonotonicityReport b = CheckWeakMonotonicity(spec, 300, 77);
  EXPECT_EQ(a.worst, b.worst);
}

TEST(MonotonicityTest, HandComputedSum) {
  GridTopology t;
  t.width = 2;
  t.height = 1;
  const GameSpec spec = BuildGrid(t, 1.0, 0);
  MonotonicityPair pair;
  pair.rho = {{0.5, 0, 0, 0, 0, 0.5, 0, 0, 0, 0}};
  pair.rho_prime = {{0.25, 0, 0, 0, 0, 0.75, 0, 0, 0, 0}};
  const double expected = 0.25 * (-std::log(0.5) + std::log(0.25)) +
                          -0.25 * (-std::log(0.5) + std::log(0.75));
  EXPECT_NEAR(MonotonicitySum(spec, 0, pair), expected, 1e-14);
  EXPECT_LT(expected, 0.0);
}

class TildeMTest : public ::testing::TestWithParam<int> {};

TEST_P(TildeMTest, SymmetricAndNonPositiveOnMonotoneGames) {
  GarnetParams p;
  p.n_x = 6;
  p.n_a = 3;
  p.n_b = 2;
  p.s_f = 2;
  p.horizon = 4;
  p.seed = GetParam();
  const GameSpec spec = BuildGarnet(p);
  const Policy pi = oracle::RandomPolicy(GetParam(), 1, 5, 6, 3);
  const Policy pi2 = oracle::RandomPolicy(GetParam() + 50, 1, 5, 6, 3);
  const double m = TildeM(spec, pi, pi2);
  EXPECT_NEAR(m, TildeM(spec, pi2, pi), 1e-12);
  EXPECT_LE(m, 1e-12);
  EXPECT_NEAR(TildeM(spec, pi, pi), 0.0, 1e-12);
}

TEST_P(TildeMTest, EqualsSummedOccupancyPairing) {
  const GameSpec spec = oracle::RandomGame(GetParam(), 3, 2, 3, 2);
  const Policy pi = oracle::RandomPolicy(GetParam(), 2, 4, 3, 2);
  const Policy pi2 = oracle::RandomPolicy(GetParam() + 9, 2, 4, 3, 2);
  const Occupancy rho = ComputeOccupancy(pi, ForwardFlow(spec, pi));
  const Occupancy rho2 = ComputeOccupancy(pi2, ForwardFlow(spec, pi2));
  double total = 0.0;
  for (int n = 0; n <= spec.horizon; ++n) {
    MonotonicityPair pair;
    pair.time = n;
    for (int i = 0; i < 2; ++i) {
      std::vector<double> a, b;
      for (int x = 0; x < 3; ++x) {
        for (int k = 0; k < 2; ++k) {
          a.push_back(rho(i, n, x, k));
          b.push_back(rho2(i, n, x, k));
        }
      }
      pair.rho.push_back(a);
      pair.rho_prime.push_back(b);
    }
    total += MonotonicitySum(spec, n, pair);
  }
  EXPECT_NEAR(TildeM(spec, pi, pi2), total, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Seeds, TildeMTest, ::testing::Range(0, 6));

TEST(MemoryTest, SingleCell) {
  EXPECT_EQ(EstimateMemory(1, 1, "omd", 4).total_bytes, 8);
  EXPECT_EQ(EstimateMemory(1, 1, "fp", 4).total_bytes, 16);
  EXPECT_EQ(EstimateMemory(1, 1, "omd", 4).human, "8 B");
  EXPECT_EQ(EstimateMemory(1, 1, "fp_damped", 8).algorithm, "fp");
}

TEST(MemoryTest, FictitiousPlayDoublesEveryPreset) {
  ASSERT_EQ(MemoryPresets().size(), 6u);
  for (const MemoryPreset& p : MemoryPresets()) {
    const MemoryEstimate omd = EstimateMemory(p.name, "omd");
    const MemoryEstimate fp = EstimateMemory(p.name, "fp");
    EXPECT_EQ(fp.total_bytes, 2 * omd.total_bytes) << p.name;
    EXPECT_EQ(omd.total_bytes, 4 * (p.state_count + p.pair_count)) << p.name;
  }
}

TEST(MemoryTest, LargeCountsStayExact) {
  const MemoryEstimate e = EstimateMemory("common_noise", "omd");
  EXPECT_EQ(e.state_count, BigCount("273000000000"));
  EXPECT_EQ(e.pair_count, BigCount("1092000000000"));
  EXPECT_EQ(e.total_bytes, BigCount("5460000000000"));
  EXPECT_EQ(e.human, "4.97 TiB");
  EXPECT_EQ(EstimateMemory("multipop_medium", "omd").human, "953.67 MiB");
}

TEST(MemoryTest, SpecCountsEveryTimestep) {
  GarnetParams p;
  p.n_x = 10;
  p.n_a = 3;
  p.horizon = 4;
  const MemoryEstimate e = EstimateMemory(BuildGarnet(p), "omd", 8);
  EXPECT_EQ(e.state_count, 50);
  EXPECT_EQ(e.pair_count, 150);
  EXPECT_EQ(e.total_bytes, 1600);
}

TEST(MemoryTest, Errors) {
  EXPECT_MFG_ERROR(EstimateMemory("nope", "omd"), ErrorCode::kConfig);
  EXPECT_MFG_ERROR(EstimateMemory(1, 1, "adam"), ErrorCode::kConfig);
  EXPECT_MFG_ERROR(EstimateMemory(1, 1, "omd", 0), ErrorCode::kParameter);
}

TEST(FormatBytesTest, BinaryUnits) {
  EXPECT_EQ(FormatBinaryBytes(1023), "1023 B");
  EXPECT_EQ(FormatBinaryBytes(1024), "1.00 KiB");
  EXPECT_EQ(FormatBinaryBytes(BigCount(3) << 40), "3.00 TiB");
}

TEST(FitRateTest, PowerLaws) {
  std::vector<double> inv, flat, inv_sqrt;
  for (int t = 1; t <= 200; ++t) {
    inv.push_back(3.0 / t);
    flat.push_back(0.7);
    inv_sqrt.push_back(1.0 / std::sqrt(t));
  }
  EXPECT_NEAR(FitRate(inv, 0.5), -1.0, 1e-12);
  EXPECT_NEAR(FitRate(flat, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(FitRate(inv_sqrt, 0.25), -0.5, 1e-12);
}

TEST(FitRateTest, ExplicitIterations) {
  const std::vector<double> t{10, 20, 40, 80};
  const std::vector<double> phi{1.0, 0.25, 0.0625, 0.015625};
  EXPECT_NEAR(FitRate(t, phi, 1.0), -2.0, 1e-12);
}

TEST(FitRateTest, Errors) {
  EXPECT_MFG_ERROR(FitRate({1.0, 0.0, 0.5}, 1.0), ErrorCode::kDomain);
  EXPECT_MFG_ERROR(FitRate({1.0, -2.0}, 1.0), ErrorCode::kDomain);
  EXPECT_MFG_ERROR(FitRate({1.0}, 1.0), ErrorCode::kDimension);
  EXPECT_MFG_ERROR(FitRate({1.0, 2.0}, 0.0), ErrorCode::kParameter);
}

}  // namespace
}  // namespace mfg
