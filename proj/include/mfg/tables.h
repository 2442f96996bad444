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

// Dense tables indexed by population, slot, state (and action).
//
// A "slot" is a timestep for the plain model (slots = horizon + 1) and a
// noise-history node for the common-noise model (slots = total tree nodes),
// so both models share one memory layout.

#ifndef MFG_TABLES_H_
#define MFG_TABLES_H_

#include <cstddef>
#include <span>
#include <vector>

namespace mfg {

struct TableShape {
  int num_populations = 0;
  int num_slots = 0;
  int num_states = 0;
  int num_actions = 0;

  bool operator==(const TableShape&) const = default;
};

// [population][slot][state][action]
class StateActionTable {
 public:
  StateActionTable() = default;
  StateActionTable(int num_populations, int num_slots, int num_states,
                   int num_actions, double fill = 0.0);

  const TableShape& shape() const { return shape_; }
  int num_populations() const { return shape_.num_populations; }
  int num_slots() const { return shape_.num_slots; }
  int num_states() const { return shape_.num_states; }
  int num_actions() const { return shape_.num_actions; }

  double& operator()(int pop, int slot, int x, int a) {
    return data_[Index(pop, slot, x, a)];
  }
  double operator()(int pop, int slot, int x, int a) const {
    return data_[Index(pop, slot, x, a)];
  }

  // Action row for one (pop, slot, state).
  std::span<double> Row(int pop, int slot, int x) {
    return {data_.data() + Index(pop, slot, x, 0),
            static_cast<std::size_t>(shape_.num_actions)};
  }
  std::span<const double> Row(int pop, int slot, int x) const {
    return {data_.data() + Index(pop, slot, x, 0),
            static_cast<std::size_t>(shape_.num_actions)};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const StateActionTable&) const = default;

 protected:
  std::size_t Index(int pop, int slot, int x, int a) const {
    return ((static_cast<std::size_t>(pop) * shape_.num_slots + slot) *
                shape_.num_states +
            x) *
               shape_.num_actions +
           a;
  }

  TableShape shape_;
  std::vector<double> data_;
};

// [population][slot][state]
class StateTable {
 public:
  StateTable() = default;
  StateTable(int num_populations, int num_slots, int num_states,
             double fill = 0.0);

  int num_populations() const { return num_populations_; }
  int num_slots() const { return num_slots_; }
  int num_states() const { return num_states_; }

  double& operator()(int pop, int slot, int x) {
    return data_[Index(pop, slot) + x];
  }
  double operator()(int pop, int slot, int x) const {
    return data_[Index(pop, slot) + x];
  }

  std::span<double> Slice(int pop, int slot) {
    return {data_.data() + Index(pop, slot),
            static_cast<std::size_t>(num_states_)};
  }
  std::span<const double> Slice(int pop, int slot) const {
    return {data_.data() + Index(pop, slot),
            static_cast<std::size_t>(num_states_)};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const StateTable&) const = default;

 private:
  std::size_t Index(int pop, int slot) const {
    return (static_cast<std::size_t>(pop) * num_slots_ + slot) * num_states_;
  }

  int num_populations_ = 0;
  int num_slots_ = 0;
  int num_states_ = 0;
  std::vector<double> data_;
};

// pi^i_n(a|x). Rows are probability vectors.
class Policy : public StateActionTable {
 public:
  using StateActionTable::StateActionTable;

  static Policy Uniform(int num_populations, int num_slots, int num_states,
                        int num_actions);

  // Copies population `src_pop` of `src` into population `dst_pop`.
  void AssignPopulation(int dst_pop, const Policy& src, int src_pop);

  // Throws kDomain if any row is not a probability vector within `tol`.
  void Validate(double tol = 1e-12) const;
};

// Accumulated dual variable y^i_n(x, a) for mirror descent.
class DualVariable : public StateActionTable {
 public:
  using StateActionTable::StateActionTable;

  double accumulated_weight = 0.0;
};

// rho^i_n(x, a) = mu^i_n(x) pi^i_n(a|x).
class Occupancy : public StateActionTable {
 public:
  using StateActionTable::StateActionTable;
};

// mu^i_n(x).
class DistributionFlow : public StateTable {
 public:
  using StateTable::StateTable;

  // Largest |sum_x mu^i_n(x) - 1| over all (i, n).
  double MaxMassError() const;
};

// Q^i_n(x, a) and V^i_n(x) for a single population.
class QFunction {
 public:
  QFunction() = default;
  QFunction(int num_slots, int num_states, int num_actions);

  int num_slots() const { return num_slots_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  double& q(int slot, int x, int a) {
    return q_[(static_cast<std::size_t>(slot) * num_states_ + x) *
                  num_actions_ +
              a];
  }
  double q(int slot, int x, int a) const {
    return q_[(static_cast<std::size_t>(slot) * num_states_ + x) *
                  num_actions_ +
              a];
  }
  std::span<const double> QRow(int slot, int x) const {
    return {q_.data() +
                (static_cast<std::size_t>(slot) * num_states_ + x) *
                    num_actions_,
            static_cast<std::size_t>(num_actions_)};
  }

  double& v(int slot, int x) {
    return v_[static_cast<std::size_t>(slot) * num_states_ + x];
  }
  double v(int slot, int x) const {
    return v_[static_cast<std::size_t>(slot) * num_states_ + x];
  }
  std::span<const double> VSlice(int slot) const {
    return {v_.data() + static_cast<std::size_t>(slot) * num_states_,
            static_cast<std::size_t>(num_states_)};
  }

  std::span<const double> q_values() const { return q_; }
  std::span<const double> v_values() const { return v_; }

  bool operator==(const QFunction&) const = default;

 private:
  int num_slots_ = 0;
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<double> q_;
  std::vector<double> v_;
};

}  // namespace mfg

#endif  // MFG_TABLES_H_
