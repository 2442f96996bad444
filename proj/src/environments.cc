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

#include "mfg/environments.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>

#include "mfg/errors.h"

namespace mfg {
namespace {

std::vector<double> UniformDistribution(int n) {
  return std::vector<double>(n, 1.0 / n);
}

// -------------------------------------------------------------- rewards

class GarnetReward : public RewardModel {
 public:
  GarnetReward(std::vector<double> base, double eta)
      : base_(std::move(base)), eta_(eta) {}

  bool separable() const override { return true; }
  double BaseReward(int, int, int x, int) const override { return base_[x]; }
  double CrowdTerm(int pop, int, int x,
                   const JointDistribution& mu) const override {
    return eta_ * CrowdAversion(mu(pop, x));
  }

 private:
  std::vector<double> base_;
  double eta_;
};

class GridReward : public RewardModel {
 public:
  GridReward(GridTopology topology, double eta)
      : topology_(std::move(topology)), eta_(eta) {}

  bool separable() const override { return true; }
  double BaseReward(int, int, int x, int) const override {
    if (!topology_.donut) return 0.0;
    const int row = x / topology_.width;
    const int col = x % topology_.width;
    return topology_.donut->Contains(row, col) ? topology_.donut->penalty
                                               : 0.0;
  }
  double CrowdTerm(int pop, int, int x,
                   const JointDistribution& mu) const override {
    if (eta_ == 0.0) return 0.0;
    return eta_ * CrowdAversion(mu(pop, x));
  }

 private:
  GridTopology topology_;
  double eta_;
};

class BuildingReward : public RewardModel {
 public:
  explicit BuildingReward(BuildingParams params)
      : params_(params),
        cells_per_floor_(params.floor_width * params.floor_height) {}

  bool separable() const override { return true; }
  double BaseReward(int, int, int x, int) const override {
    return x < cells_per_floor_ ? params_.arrival_bonus : 0.0;
  }
  double CrowdTerm(int pop, int, int x,
                   const JointDistribution& mu) const override {
    const double log_mu = std::log(std::max(mu(pop, x), kFloorEpsilon));
    return -params_.eta * std::max(log_mu, params_.clip_floor);
  }

 private:
  BuildingParams params_;
  int cells_per_floor_;
};

class FixedBarReward : public RewardModel {
 public:
  FixedBarReward(BeachBarParams params, int bar)
      : params_(params), bar_(bar) {}

  bool separable() const override { return true; }
  double BaseReward(int, int, int x, int) const override {
    return BeachBarReward(params_, bar_, x, 1.0);
  }
  double CrowdTerm(int pop, int, int x,
                   const JointDistribution& mu) const override {
    return CrowdAversion(mu(pop, x));
  }

 private:
  BeachBarParams params_;
  int bar_;
};

// Variant = bar cell.
class ShiftingBarReward : public ConditionalRewardModel {
 public:
  explicit ShiftingBarReward(BeachBarParams params) : params_(params) {}

  double Reward(int pop, int, int variant, int x, int,
                const JointDistribution& mu) const override {
    return BeachBarReward(params_, variant, x, mu(pop, x));
  }

 private:
  BeachBarParams params_;
};

class ChasingReward : public RewardModel {
 public:
  ChasingReward(GridTopology topology, ChasingMatrix matrix)
      : topology_(std::move(topology)), matrix_(std::move(matrix)) {}

  bool separable() const override { return true; }
  double BaseReward(int, int, int x, int) const override {
    if (!topology_.donut) return 0.0;
    const int row = x / topology_.width;
    const int col = x % topology_.width;
    return topology_.donut->Contains(row, col) ? topology_.donut->penalty
                                               : 0.0;
  }
  double CrowdTerm(int pop, int, int x,
                   const JointDistribution& mu) const override {
    double value = CrowdAversion(mu(pop, x));
    for (int j = 0; j < mu.num_populations(); ++j) {
      if (j == pop) continue;
      value += mu(j, x) * matrix_(pop, j);
    }
    return value;
  }

 private:
  GridTopology topology_;
  ChasingMatrix matrix_;
};

GridLayout FlatLayout(int n) { return GridLayout{1, 1, n}; }

}  // namespace

// ----------------------------------------------------------------- Garnet

GameSpec BuildGarnet(const GarnetParams& p) {
  if (p.n_x <= 0 || p.n_a <= 0 || p.n_b <= 0 || p.s_f < 0 || p.horizon < 0) {
    Fail(ErrorCode::kParameter, "garnet: dimensions must be positive");
  }
  if (p.n_b > p.n_x) Fail(ErrorCode::kParameter, "garnet: n_b > n_x");
  if (p.s_f > p.n_x) Fail(ErrorCode::kParameter, "garnet: s_f > n_x");
  if (!(p.eta > 0.0)) Fail(ErrorCode::kParameter, "garnet: eta must be > 0");

  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<int> states(p.n_x);
  std::vector<std::vector<Successor>> rows;
  rows.reserve(static_cast<std::size_t>(p.n_x) * p.n_a);
  for (int x = 0; x < p.n_x; ++x) {
    for (int a = 0; a < p.n_a; ++a) {
      // Partial Fisher-Yates: the first n_b entries become the successors.
      std::iota(states.begin(), states.end(), 0);
      for (int k = 0; k < p.n_b; ++k) {
        std::uniform_int_distribution<int> pick(k, p.n_x - 1);
        std::swap(states[k], states[pick(rng)]);
      }
      std::vector<double> cuts(p.n_b - 1);
      for (double& c : cuts) {
        do {
          c = unit(rng);
        } while (c == 0.0);
      }
      std::sort(cuts.begin(), cuts.end());
      std::vector<Successor> row;
      row.reserve(p.n_b);
      double previous = 0.0;
      for (int k = 0; k < p.n_b; ++k) {
        const double next = k + 1 < p.n_b ? cuts[k] : 1.0;
        row.push_back({states[k], next - previous});
        previous = next;
      }
      rows.push_back(std::move(row));
    }
  }

  std::vector<double> base(p.n_x);
  for (double& b : base) b = unit(rng);
  std::iota(states.begin(), states.end(), 0);
  for (int k = 0; k < p.s_f; ++k) {
    std::uniform_int_distribution<int> pick(k, p.n_x - 1);
    std::swap(states[k], states[pick(rng)]);
    base[states[k]] = 0.0;
  }

  GameSpec spec;
  std::ostringstream name;
  name << "garnet(n_x=" << p.n_x << ",n_a=" << p.n_a << ",n_b=" << p.n_b
       << ",s_f=" << p.s_f << ",seed=" << p.seed << ")";
  spec.name = name.str();
  spec.num_states = p.n_x;
  spec.num_actions = p.n_a;
  spec.horizon = p.horizon;
  spec.num_populations = 1;
  spec.transition = TransitionKernel(p.n_x, p.n_a, rows);
  spec.reward = std::make_shared<GarnetReward>(std::move(base), p.eta);
  spec.initial_distributions = {UniformDistribution(p.n_x)};
  spec.layout = FlatLayout(p.n_x);
  spec.Validate();
  return spec;
}

// ------------------------------------------------------------------- Grids

void GridTopology::Validate() const {
  if (width <= 0 || height <= 0) {
    Fail(ErrorCode::kParameter, "grid dimensions must be positive");
  }
  if (donut) {
    const DonutZone& z = *donut;
    if (z.row_begin < 0 || z.col_begin < 0 || z.row_end >= height ||
        z.col_end >= width || z.row_begin > z.row_end ||
        z.col_begin > z.col_end) {
      Fail(ErrorCode::kParameter, "donut zone outside the grid");
    }
  }
}

GridTopology GridTopology::Donut(int width, int height, double penalty) {
  GridTopology t;
  t.width = width;
  t.height = height;
  t.wrap = GridWrap::kSquare;
  t.donut = DonutZone{height / 3, width / 3, height - 1 - height / 3,
                      width - 1 - width / 3, penalty};
  return t;
}

int GridMove(const GridTopology& t, int cell, int action) {
  int row = cell / t.width;
  int col = cell % t.width;
  int dr = 0;
  int dc = 0;
  switch (action) {
    case kUp: dr = -1; break;
    case kDown: dr = 1; break;
    case kLeft: dc = -1; break;
    case kRight: dc = 1; break;
    default: break;
  }
  int nr = row + dr;
  int nc = col + dc;
  if (t.wrap == GridWrap::kTorus) {
    nr = (nr + t.height) % t.height;
    nc = (nc + t.width) % t.width;
  } else if (nr < 0 || nr >= t.height || nc < 0 || nc >= t.width) {
    return cell;
  }
  return nr * t.width + nc;
}

TransitionKernel GridKernel(const GridTopology& t) {
  t.Validate();
  std::vector<std::vector<Successor>> rows;
  rows.reserve(static_cast<std::size_t>(t.num_cells()) * kNumGridActions);
  for (int x = 0; x < t.num_cells(); ++x) {
    for (int a = 0; a < kNumGridActions; ++a) {
      rows.push_back({{GridMove(t, x, a), 1.0}});
    }
  }
  return TransitionKernel(t.num_cells(), kNumGridActions, rows);
}

GameSpec BuildGrid(const GridTopology& topology, double eta, int horizon) {
  if (horizon < 0) Fail(ErrorCode::kParameter, "grid: negative horizon");
  GameSpec spec;
  spec.name = "grid";
  spec.num_states = topology.num_cells();
  spec.num_actions = kNumGridActions;
  spec.horizon = horizon;
  spec.num_populations = 1;
  spec.transition = GridKernel(topology);
  spec.reward = std::make_shared<GridReward>(topology, eta);
  spec.initial_distributions = {UniformDistribution(spec.num_states)};
  spec.layout = GridLayout{1, topology.height, topology.width};
  spec.Validate();
  return spec;
}

// ---------------------------------------------------------------- Building

int BuildingState(const BuildingParams& p, int floor, int row, int col) {
  return (floor * p.floor_height + row) * p.floor_width + col;
}

int BuildingDownCorner(int floor) { return floor % 2; }

GameSpec BuildBuilding(const BuildingParams& p) {
  if (p.floors <= 0 || p.floor_width <= 0 || p.floor_height <= 0 ||
      p.horizon < 0) {
    Fail(ErrorCode::kParameter, "building: dimensions must be positive");
  }
  GridTopology floor_grid;
  floor_grid.width = p.floor_width;
  floor_grid.height = p.floor_height;
  floor_grid.wrap = GridWrap::kSquare;
  const int per_floor = p.floor_width * p.floor_height;
  const int corner_cells[2] = {0, per_floor - 1};

  std::vector<std::vector<Successor>> rows;
  rows.reserve(static_cast<std::size_t>(per_floor) * p.floors *
               kNumBuildingActions);
  for (int f = 0; f < p.floors; ++f) {
    for (int cell = 0; cell < per_floor; ++cell) {
      const int here = f * per_floor + cell;
      for (int a = 0; a < kNumGridActions; ++a) {
        rows.push_back({{f * per_floor + GridMove(floor_grid, cell, a), 1.0}});
      }
      // The stairs down from floor f arrive on floor f-1's stairs up.
      const bool stairs_up = f + 1 < p.floors &&
                             cell == corner_cells[BuildingDownCorner(f + 1)];
      const bool stairs_down =
          f > 0 && cell == corner_cells[BuildingDownCorner(f)];
      rows.push_back({{stairs_up ? here + per_floor : here, 1.0}});
      rows.push_back({{stairs_down ? here - per_floor : here, 1.0}});
    }
  }

  GameSpec spec;
  spec.name = "building";
  spec.num_states = per_floor * p.floors;
  spec.num_actions = kNumBuildingActions;
  spec.horizon = p.horizon;
  spec.num_populations = 1;
  spec.transition = TransitionKernel(spec.num_states, kNumBuildingActions, rows);
  spec.reward = std::make_shared<BuildingReward>(p);
  spec.initial_distributions = {UniformDistribution(spec.num_states)};
  spec.layout = GridLayout{p.floors, p.floor_height, p.floor_width};
  spec.Validate();
  return spec;
}

// -------------------------------------------------------- Beach bar + noise

int BeachBarCenter(const BeachBarParams& p) {
  return (p.side / 2) * p.side + p.side / 2;
}

double BeachBarReward(const BeachBarParams& p, int bar_cell, int cell,
                      double mu) {
  const int distance = std::abs(bar_cell / p.side - cell / p.side) +
                       std::abs(bar_cell % p.side - cell % p.side);
  return p.bar_reward * (1.0 - distance / (2.0 * p.side)) + CrowdAversion(mu);
}

NoiseGame BuildBeachBarNoise(const BeachBarParams& p) {
  if (p.side < 3) Fail(ErrorCode::kParameter, "beach bar: side must be >= 3");
  if (p.shift_period <= 0 || p.num_shifts < 0 || p.shift_step < 0) {
    Fail(ErrorCode::kParameter, "beach bar: invalid shift schedule");
  }
  GridTopology torus;
  torus.width = p.side;
  torus.height = p.side;
  torus.wrap = GridWrap::kTorus;
  const int horizon = p.shift_period * (p.num_shifts + 1) - 1;
  const int center = BeachBarCenter(p);

  // Toward TL, TR, BR, BL.
  constexpr int kCornerRow[4] = {-1, -1, 1, 1};
  constexpr int kCornerCol[4] = {-1, 1, 1, -1};
  auto shifted = [&](int bar, int corner) {
    const int row = ((bar / p.side + kCornerRow[corner] * p.shift_step) %
                         p.side + p.side) % p.side;
    const int col = ((bar % p.side + kCornerCol[corner] * p.shift_step) %
                         p.side + p.side) % p.side;
    return row * p.side + col;
  };

  std::vector<std::vector<NoiseNode>> levels(horizon + 1);
  std::vector<std::vector<int>> bars(horizon + 1);
  levels[0].push_back(NoiseNode{});
  bars[0].push_back(center);
  for (int n = 0; n <= horizon; ++n) {
    const bool shift = n < horizon && (n + 1) % p.shift_period == 0 &&
                       (n + 1) / p.shift_period <= p.num_shifts;
    for (int k = 0; k < static_cast<int>(levels[n].size()); ++k) {
      const int bar = bars[n][k];
      auto& branches = levels[n][k].branches;
      if (n == horizon) {
        branches.push_back({1.0, 0, bar, -1});
      } else if (!shift) {
        branches.push_back(
            {1.0, 0, bar, static_cast<int>(levels[n + 1].size())});
        levels[n + 1].push_back(NoiseNode{k, {}});
        bars[n + 1].push_back(bar);
      } else {
        for (int corner = 0; corner < 4; ++corner) {
          branches.push_back(
              {0.25, 0, bar, static_cast<int>(levels[n + 1].size())});
          levels[n + 1].push_back(NoiseNode{k, {}});
          bars[n + 1].push_back(shifted(bar, corner));
        }
      }
    }
  }

  NoiseGame game;
  GameSpec& spec = game.spec;
  std::ostringstream name;
  name << "beach_bar(side=" << p.side << ",period=" << p.shift_period
       << ",shifts=" << p.num_shifts << ")";
  spec.name = name.str();
  spec.num_states = torus.num_cells();
  spec.num_actions = kNumGridActions;
  spec.horizon = horizon;
  spec.num_populations = 1;
  spec.transition = GridKernel(torus);
  spec.reward = std::make_shared<FixedBarReward>(p, center);
  spec.initial_distributions = {UniformDistribution(spec.num_states)};
  spec.layout = GridLayout{1, p.side, p.side};
  std::vector<TransitionKernel> kernels{spec.transition};
  game.tree = NoiseTree(std::move(levels), std::move(kernels));
  game.reward = std::make_shared<ShiftingBarReward>(p);
  game.Validate();
  return game;
}

std::vector<std::uint64_t> BeachBarEpochNodeCounts(int num_shifts) {
  std::vector<std::uint64_t> counts;
  std::uint64_t nodes = 1;
  for (int k = 0; k <= num_shifts; ++k) {
    counts.push_back(nodes);
    nodes *= 4;
  }
  return counts;
}

std::uint64_t BeachBarAugmentedStateCount(std::uint64_t side,
                                          std::uint64_t shift_period,
                                          int num_shifts) {
  std::uint64_t histories = 0;
  for (std::uint64_t c : BeachBarEpochNodeCounts(num_shifts)) histories += c;
  return side * side * shift_period * histories;
}

// ---------------------------------------------------------------- Chasing

ChasingMatrix::ChasingMatrix(int size, std::vector<double> values)
    : size_(size), values_(std::move(values)) {
  if (size <= 0 ||
      values_.size() != static_cast<std::size_t>(size) * size) {
    Fail(ErrorCode::kParameter, "chasing matrix must be square");
  }
  if (!IsAntisymmetric()) {
    Fail(ErrorCode::kParameter, "chasing matrix must be antisymmetric");
  }
}

ChasingMatrix ChasingMatrix::Cyclic(int size) {
  if (size < 3) {
    Fail(ErrorCode::kParameter,
         "cyclic chasing needs >= 3 populations; give an explicit matrix");
  }
  std::vector<double> values(static_cast<std::size_t>(size) * size, 0.0);
  for (int i = 0; i < size; ++i) {
    values[i * size + (i + 1) % size] = -1.0;
    values[i * size + (i + size - 1) % size] = 1.0;
  }
  return ChasingMatrix(size, std::move(values));
}

bool ChasingMatrix::IsAntisymmetric() const {
  for (int i = 0; i < size_; ++i) {
    for (int j = 0; j < size_; ++j) {
      if ((*this)(i, j) != -(*this)(j, i)) return false;
    }
  }
  return true;
}

GameSpec BuildChasing(const ChasingParams& p) {
  if (p.num_populations < 2) {
    Fail(ErrorCode::kParameter, "chasing needs at least 2 populations");
  }
  p.topology.Validate();
  ChasingMatrix matrix =
      p.matrix ? *p.matrix : ChasingMatrix::Cyclic(p.num_populations);
  if (matrix.size() != p.num_populations) {
    Fail(ErrorCode::kParameter, "chasing matrix size != populations");
  }
  const int w = p.topology.width;
  const int h = p.topology.height;
  const int cells = p.topology.num_cells();

  std::vector<std::vector<double>> initial;
  if (p.init == ChasingInit::kCorners) {
    if (p.num_populations > 4) {
      Fail(ErrorCode::kParameter, "corner init supports at most 4 populations");
    }
    const int bw = (w + 9) / 10;
    const int bh = (h + 9) / 10;
    const int row0[4] = {0, 0, h - bh, h - bh};
    const int col0[4] = {0, w - bw, w - bw, 0};
    for (int i = 0; i < p.num_populations; ++i) {
      std::vector<double> mu(cells, 0.0);
      for (int r = 0; r < bh; ++r) {
        for (int c = 0; c < bw; ++c) {
          mu[(row0[i] + r) * w + col0[i] + c] = 1.0 / (bw * bh);
        }
      }
      initial.push_back(std::move(mu));
    }
  } else {
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < p.num_populations; ++i) {
      std::vector<double> mu(cells);
      double sum = 0.0;
      for (double& m : mu) {
        m = unit(rng);
        sum += m;
      }
      for (double& m : mu) m /= sum;
      initial.push_back(std::move(mu));
    }
  }

  GameSpec spec;
  std::ostringstream name;
  name << "chasing(populations=" << p.num_populations << ")";
  spec.name = name.str();
  spec.num_states = cells;
  spec.num_actions = kNumGridActions;
  spec.horizon = p.horizon;
  spec.num_populations = p.num_populations;
  spec.transition = GridKernel(p.topology);
  spec.reward = std::make_shared<ChasingReward>(p.topology, std::move(matrix));
  spec.initial_distributions = std::move(initial);
  spec.layout = GridLayout{1, h, w};
  spec.Validate();
  return spec;
}

// ---------------------------------------------------------------- Presets

std::vector<std::string> DeskPresetNames() {
  return {"garnet_desk", "building_desk", "beach_bar_desk", "chasing_desk",
          "grid_desk"};
}

Environment BuildDeskPreset(const std::string& name, std::uint64_t seed) {
  Environment env;
  if (name == "garnet_desk") {
    GarnetParams p;
    p.seed = seed;
    env.spec = BuildGarnet(p);
  } else if (name == "building_desk") {
    BuildingParams p;
    p.floors = 3;
    p.floor_width = 6;
    p.floor_height = 6;
    p.horizon = 20;
    env.spec = BuildBuilding(p);
  } else if (name == "beach_bar_desk") {
    NoiseGame game = BuildBeachBarNoise(BeachBarParams{});
    env.spec = game.spec;
    env.noise = std::move(game);
  } else if (name == "chasing_desk") {
    ChasingParams p;
    p.num_populations = 4;
    p.topology.width = 15;
    p.topology.height = 15;
    p.topology.wrap = GridWrap::kTorus;
    p.init = ChasingInit::kCorners;
    p.seed = seed;
    p.horizon = 10;
    env.spec = BuildChasing(p);
  } else if (name == "grid_desk") {
    env.spec = BuildGrid(GridTopology::Donut(10, 10, -1.0), 1.0, 10);
  } else {
    Fail(ErrorCode::kConfig, "unknown preset '" + name + "'");
  }
  return env;
}

}  // namespace mfg
