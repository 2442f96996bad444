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

#include "mfg/c_api.h"

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace {

namespace fs = std::filesystem;
using ::mfg::testing::ScratchDir;

TEST(CApiTest, VersionAndStatusNames) {
  EXPECT_STREQ(mfg_version(), "1.0.0");
  EXPECT_STREQ(mfg_status_name(MFG_OK), "ok");
  EXPECT_EQ(mfg_exit_code(MFG_OK), 0);
  EXPECT_EQ(mfg_exit_code(MFG_ERR_CONFIG), 2);
  EXPECT_EQ(mfg_exit_code(MFG_ERR_IO), 2);
  EXPECT_EQ(mfg_exit_code(MFG_ERR_NUMERIC), 3);
  EXPECT_EQ(mfg_exit_code(MFG_ERR_INTERNAL), 1);
}

TEST(CApiTest, NullArgumentsAreRejected) {
  EXPECT_EQ(mfg_config_parse(nullptr, nullptr), MFG_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(mfg_last_error()), "");
  mfg_game* game = nullptr;
  EXPECT_EQ(mfg_game_from_preset(nullptr, 0, &game), MFG_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(mfg_forward_flow(nullptr, nullptr, nullptr),
            MFG_ERR_INVALID_ARGUMENT);
  mfg_config_free(nullptr);
  mfg_game_free(nullptr);
  mfg_policy_free(nullptr);
  mfg_flow_free(nullptr);
  mfg_string_free(nullptr);
}

TEST(CApiTest, ConfigErrorsCarryMessages) {
  mfg_config* config = nullptr;
  EXPECT_EQ(mfg_config_parse("[environment]\npreset = \"nope\"\n", &config),
            MFG_ERR_CONFIG);
  EXPECT_EQ(config, nullptr);
  EXPECT_NE(std::string(mfg_last_error()).find("nope"), std::string::npos);
  EXPECT_EQ(mfg_config_load("/nonexistent.toml", &config), MFG_ERR_CONFIG);
}

TEST(CApiTest, GameLifecycle) {
  mfg_game* game = nullptr;
  ASSERT_EQ(mfg_game_from_preset("grid_desk", 0, &game), MFG_OK);
  int states = 0, actions = 0, horizon = 0, pops = 0, slots = 0;
  ASSERT_EQ(mfg_game_dims(game, &states, &actions, &horizon, &pops, &slots),
            MFG_OK);
  EXPECT_EQ(states, 100);
  EXPECT_EQ(actions, 5);
  EXPECT_EQ(slots, horizon + 1);

  mfg_policy* uniform = nullptr;
  ASSERT_EQ(mfg_policy_uniform(game, &uniform), MFG_OK);
  mfg_flow* flow = nullptr;
  ASSERT_EQ(mfg_forward_flow(game, uniform, &flow), MFG_OK);
  std::vector<double> mu(static_cast<std::size_t>(pops) * slots * states);
  ASSERT_EQ(mfg_flow_values(flow, mu.data(), mu.size()), MFG_OK);
  for (int n = 0; n < slots; ++n) {
    double mass = 0.0;
    for (int x = 0; x < states; ++x) mass += mu[n * states + x];
    EXPECT_NEAR(mass, 1.0, 1e-12);
  }
  EXPECT_EQ(mfg_flow_values(flow, mu.data(), mu.size() - 1),
            MFG_ERR_DIMENSION);

  double phi_uniform = 0.0;
  ASSERT_EQ(mfg_exploitability(game, uniform, &phi_uniform), MFG_OK);
  mfg_policy* solved = nullptr;
  double phi_solved = 0.0;
  ASSERT_EQ(mfg_solve(game, "omd", 0.1, 50, &solved, &phi_solved), MFG_OK);
  EXPECT_LT(phi_solved, phi_uniform);

  std::vector<double> values(static_cast<std::size_t>(pops) * slots * states *
                             actions);
  ASSERT_EQ(mfg_policy_values(solved, values.data(), values.size()), MFG_OK);
  mfg_policy* copy = nullptr;
  ASSERT_EQ(mfg_policy_from_values(game, values.data(), values.size(), &copy),
            MFG_OK);
  double phi_copy = 0.0;
  ASSERT_EQ(mfg_exploitability(game, copy, &phi_copy), MFG_OK);
  EXPECT_EQ(phi_copy, phi_solved);

  values[0] = -1.0;
  mfg_policy* bad = nullptr;
  EXPECT_EQ(mfg_policy_from_values(game, values.data(), values.size(), &bad),
            MFG_ERR_DOMAIN);
  EXPECT_EQ(mfg_policy_from_values(game, values.data(), 3, &bad),
            MFG_ERR_DIMENSION);
  EXPECT_EQ(mfg_solve(game, "newton", 0.1, 5, &bad, nullptr), MFG_ERR_CONFIG);

  mfg_policy_free(copy);
  mfg_policy_free(solved);
  mfg_flow_free(flow);
  mfg_policy_free(uniform);
  mfg_game_free(game);
}

TEST(CApiTest, NoiseGameUsesTreeSlots) {
  mfg_game* game = nullptr;
  ASSERT_EQ(mfg_game_from_preset("beach_bar_desk", 0, &game), MFG_OK);
  int states = 0, actions = 0, horizon = 0, pops = 0, slots = 0;
  ASSERT_EQ(mfg_game_dims(game, &states, &actions, &horizon, &pops, &slots),
            MFG_OK);
  EXPECT_EQ(horizon, 14);
  EXPECT_EQ(slots, 5 * 1 + 5 * 4 + 5 * 16);
  mfg_game_free(game);
}

TEST(CApiTest, RunAndExport) {
  const fs::path dir = ScratchDir("c_api_run");
  const std::string text =
      "[environment]\nbuilder = \"grid\"\nwidth = 3\nheight = 3\nhorizon = 2\n"
      "[algorithm]\nmax_iterations = 3\n";
  mfg_config* config = nullptr;
  ASSERT_EQ(mfg_config_parse(text.c_str(), &config), MFG_OK);
  ASSERT_EQ(mfg_config_set_output(config, dir.c_str()), MFG_OK);
  ASSERT_EQ(mfg_config_set_reproducible(config, 1), MFG_OK);
  ASSERT_EQ(mfg_config_set_seed(config, 4), MFG_OK);
  double phi = -1.0;
  ASSERT_EQ(mfg_run(config, &phi), MFG_OK) << mfg_last_error();
  EXPECT_GE(phi, 0.0);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));

  const fs::path heat = dir / "heat";
  ASSERT_EQ(mfg_export(config, (dir / "flow_final.csv").c_str(), 3,
                       heat.c_str()),
            MFG_OK)
      << mfg_last_error();
  EXPECT_TRUE(fs::exists(heat / "snap_t3_n2_pop0.pgm"));
  EXPECT_EQ(mfg_export(config, (dir / "missing.csv").c_str(), 0,
                       heat.c_str()),
            MFG_ERR_IO);

  EXPECT_EQ(mfg_config_set_algorithm(config, "bogus"), MFG_ERR_CONFIG);
  EXPECT_EQ(mfg_config_set_preset(config, "chasing_desk"), MFG_OK);
  mfg_config_free(config);
}

TEST(CApiTest, MonotonicityAndMemory) {
  mfg_config* config = nullptr;
  ASSERT_EQ(mfg_config_parse("[environment]\nbuilder = \"grid\"\nwidth = 3\n"
                             "height = 3\neta = -1.0\nhorizon = 1\n"
                             "[monotonicity]\nsamples = 50\n",
                             &config),
            MFG_OK);
  int violation = 0;
  char* json = nullptr;
  ASSERT_EQ(mfg_check_monotone(config, &violation, &json), MFG_OK);
  EXPECT_EQ(violation, 1);
  ASSERT_NE(json, nullptr);
  EXPECT_NE(std::string(json).find("\"violation\""), std::string::npos);
  mfg_string_free(json);
  mfg_config_free(config);

  ASSERT_EQ(mfg_estimate_memory("building", "omd", 4, &json), MFG_OK);
  EXPECT_NE(std::string(json).find("\"256000000000\""), std::string::npos)
      << json;
  mfg_string_free(json);
  ASSERT_EQ(mfg_estimate_memory("garnet_desk", "fp", 8, &json), MFG_OK);
  mfg_string_free(json);
  EXPECT_EQ(mfg_estimate_memory("nothing", "omd", 4, &json), MFG_ERR_CONFIG);
}

}  // namespace
