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

// Builders for the bundled environment families: Garnet, grid worlds,
// building evacuation, beach bar with a randomly shifted point of interest,
// and multi-population chasing.

#ifndef MFG_ENVIRONMENTS_H_
#define MFG_ENVIRONMENTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfg/common_noise.h"
#include "mfg/game.h"

namespace mfg {

// ----------------------------------------------------------------- Garnet

struct GarnetParams {
  int n_x = 50;   // states
  int n_a = 5;    // actions
  int n_b = 1;    // successors per (state, action)
  int s_f = 10;   // states with zero base reward
  double eta = 1.0;
  int horizon = 20;
  std::uint64_t seed = 0;
};

// Random kernel with n_b distinct successors per pair; base reward 0 on s_f
// random states and U(0,1) per state elsewhere; crowd term -eta log mu(x);
// uniform initial distribution.
GameSpec BuildGarnet(const GarnetParams& params);

// ------------------------------------------------------------------- Grids

enum class GridWrap { kSquare, kTorus };

// Inclusive rectangle whose cells receive `penalty` (added to the reward).
struct DonutZone {
  int row_begin = 0;
  int col_begin = 0;
  int row_end = 0;
  int col_end = 0;
  double penalty = -1.0;

  bool Contains(int row, int col) const {
    return row >= row_begin && row <= row_end && col >= col_begin &&
           col <= col_end;
  }
};

struct GridTopology {
  int width = 10;
  int height = 10;
  GridWrap wrap = GridWrap::kTorus;
  std::optional<DonutZone> donut;

  int num_cells() const { return width * height; }
  void Validate() const;
  // Square grid with a centered zone covering the middle third.
  static GridTopology Donut(int width, int height, double penalty);
};

// Movement actions shared by every grid environment.
enum GridAction : int { kStay = 0, kUp = 1, kDown = 2, kLeft = 3, kRight = 4 };
inline constexpr int kNumGridActions = 5;

// Cell reached from `cell` with `action`; walls act as stay on squares.
int GridMove(const GridTopology& topology, int cell, int action);
TransitionKernel GridKernel(const GridTopology& topology);

// Single population, reward -eta log mu(x) plus the donut penalty, uniform
// initial distribution. eta = 0 gives a mu-independent reward and eta < 0 a
// crowd-seeking (anti-monotone) one.
GameSpec BuildGrid(const GridTopology& topology, double eta, int horizon);

// ---------------------------------------------------------------- Building

struct BuildingParams {
  int floors = 20;
  int floor_width = 200;
  int floor_height = 200;
  int horizon = 10000;
  double eta = 1.0;
  double arrival_bonus = 10.0;
  // Lower clip applied to log mu(x) before scaling by -eta.
  double clip_floor = -40.0;
};

enum BuildingAction : int { kFloorUp = 5, kFloorDown = 6 };
inline constexpr int kNumBuildingActions = 7;

// Reward -eta * max(log mu(x), clip_floor) + arrival_bonus * [floor == 0].
// Staircases sit at opposite corners (0,0) and (h-1,w-1) and alternate
// between floors, so each descent crosses the whole floor.
GameSpec BuildBuilding(const BuildingParams& params);

int BuildingState(const BuildingParams& params, int floor, int row, int col);
// Corner holding the staircase down from `floor` (0: (0,0), 1: (h-1,w-1)).
int BuildingDownCorner(int floor);

// -------------------------------------------------------- Beach bar + noise

struct BeachBarParams {
  int side = 11;
  int shift_period = 5;
  int num_shifts = 2;
  double bar_reward = 10.0;  // C
  int shift_step = 1;        // cells moved per shift along each axis
};

// Horizon N = shift_period * (num_shifts + 1) - 1. At the last step of each
// of the first num_shifts epochs the bar moves diagonally toward one of the
// four corners with probability 1/4 each. The reward at step n reads the bar
// position known from the history before the step:
//   C * (1 - |bar - (i,j)|_1 / (2 side)) - log mu(x).
// The returned spec (noise-free variant) keeps the bar at the center.
NoiseGame BuildBeachBarNoise(const BeachBarParams& params);

// Reward of the beach bar for a given bar cell.
double BeachBarReward(const BeachBarParams& params, int bar_cell, int cell,
                      double mu);

int BeachBarCenter(const BeachBarParams& params);

// Distinct bar histories per epoch: 4^k for epoch k.
std::vector<std::uint64_t> BeachBarEpochNodeCounts(int num_shifts);

// Augmented state count positions x sum_n nodes(n), computed without
// building the tree.
std::uint64_t BeachBarAugmentedStateCount(std::uint64_t side,
                                          std::uint64_t shift_period,
                                          int num_shifts);

// ---------------------------------------------------------------- Chasing

// Antisymmetric interaction matrix rbar^{i,j}.
class ChasingMatrix {
 public:
  ChasingMatrix() = default;
  ChasingMatrix(int size, std::vector<double> values);

  // -1 if j == i+1 (mod n), +1 if j == i-1 (mod n), else 0. Needs n >= 3.
  static ChasingMatrix Cyclic(int size);

  int size() const { return size_; }
  double operator()(int i, int j) const { return values_[i * size_ + j]; }
  bool IsAntisymmetric() const;

 private:
  int size_ = 0;
  std::vector<double> values_;
};

enum class ChasingInit { kCorners, kRandom };

struct ChasingParams {
  int num_populations = 3;
  GridTopology topology;
  ChasingInit init = ChasingInit::kCorners;
  std::uint64_t seed = 0;
  int horizon = 10;
  std::optional<ChasingMatrix> matrix;  // cyclic when absent
};

// r^i(x, a, mu) = -log mu^i(x) + sum_{j != i} mu^j(x) rbar^{i,j}
// (+ donut penalty). Corner initialization is uniform over a
// ceil(w/10) x ceil(h/10) block at corners TL, TR, BR, BL in that order.
GameSpec BuildChasing(const ChasingParams& params);

// ---------------------------------------------------------------- Presets

struct Environment {
  GameSpec spec;
  std::optional<NoiseGame> noise;  // set for games with common noise
};

// Desk-scale presets: garnet_desk, building_desk, beach_bar_desk,
// chasing_desk, grid_desk.
Environment BuildDeskPreset(const std::string& name, std::uint64_t seed);
std::vector<std::string> DeskPresetNames();

}  // namespace mfg

#endif  // MFG_ENVIRONMENTS_H_
