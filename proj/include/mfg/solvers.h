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

// Learning dynamics: Online Mirror Descent and the Fictitious Play family.
//
// Both are written against GameModel so the same loop drives plain games and
// games with common noise.

#ifndef MFG_SOLVERS_H_
#define MFG_SOLVERS_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mfg/common_noise.h"
#include "mfg/dynamics.h"
#include "mfg/game.h"
#include "mfg/mirror.h"
#include "mfg/tables.h"

namespace mfg {

class GameModel {
 public:
  virtual ~GameModel() = default;

  virtual TableShape policy_shape() const = 0;
  virtual const std::vector<std::vector<double>>& initial_distributions()
      const = 0;
  virtual DistributionFlow Flow(const Policy& policy) const = 0;
  virtual QFunction Evaluate(int pop, const Policy& policy,
                             const DistributionFlow& flow) const = 0;
  virtual BestResponseResult BestRespond(
      int pop, const DistributionFlow& flow) const = 0;
  virtual ExploitabilityResult Exploit(const Policy& policy) const = 0;

  Policy UniformPolicy() const;
};

class PlainModel : public GameModel {
 public:
  explicit PlainModel(const GameSpec& spec) : spec_(spec) {}

  TableShape policy_shape() const override;
  const std::vector<std::vector<double>>& initial_distributions()
      const override {
    return spec_.initial_distributions;
  }
  DistributionFlow Flow(const Policy& policy) const override;
  QFunction Evaluate(int pop, const Policy& policy,
                     const DistributionFlow& flow) const override;
  BestResponseResult BestRespond(int pop,
                                 const DistributionFlow& flow) const override;
  ExploitabilityResult Exploit(const Policy& policy) const override;

 private:
  const GameSpec& spec_;
};

class NoiseModel : public GameModel {
 public:
  explicit NoiseModel(const NoiseGame& game) : game_(game) {}

  TableShape policy_shape() const override;
  const std::vector<std::vector<double>>& initial_distributions()
      const override {
    return game_.spec.initial_distributions;
  }
  DistributionFlow Flow(const Policy& policy) const override;
  QFunction Evaluate(int pop, const Policy& policy,
                     const DistributionFlow& flow) const override;
  BestResponseResult BestRespond(int pop,
                                 const DistributionFlow& flow) const override;
  ExploitabilityResult Exploit(const Policy& policy) const override;

 private:
  const NoiseGame& game_;
};

enum class Algorithm { kOmd, kFpDecreasing, kFpDamped, kFixedPoint };

std::string AlgorithmName(Algorithm algorithm);
// Accepts "omd", "fp_decreasing", "fp_damped", "fixed_point".
Algorithm ParseAlgorithm(const std::string& name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::kOmd;
  double learning_rate = 0.1;
  int max_iterations = 100;
  // 0 picks the default cadence: every iteration up to 1000 states, every
  // 10 iterations above.
  int exploitability_every = 0;
  std::uint64_t seed = 0;
  std::vector<int> snapshot_iterations;
  bool snapshot_final = false;

  void Validate() const;
  int ExploitabilityCadence(int num_states) const;
};

struct IterationRecord {
  int iteration = 0;
  double phi_total = 0.0;
  std::vector<double> phi_per_population;
  double elapsed_seconds = 0.0;
  std::optional<double> h_diag;

  bool operator==(const IterationRecord&) const = default;
};

struct SolverRun {
  SolverConfig config;
  int num_populations = 1;
  std::vector<IterationRecord> records;
  Policy final_policy;
  DistributionFlow final_flow;
};

struct SolveOptions {
  // Enables the similarity-to-reference diagnostic (OMD on plain games).
  const Policy* reference_policy = nullptr;
  // Called at each snapshot iteration with the current policy and its flow.
  std::function<void(int iteration, const Policy&, const DistributionFlow&)>
      on_snapshot;
  // When false, elapsed_seconds is recorded as 0 (reproducible output).
  bool record_timing = true;
};

// Online mirror descent: y <- y + alpha * Q^{pi_t, mu^{pi_t}}, pi_{t+1} = Gamma(y).
class MirrorDescent {
 public:
  MirrorDescent(const GameModel& model, const Regularizer& reg,
                double learning_rate);

  void Step();

  const Policy& policy() const { return policy_; }
  const DualVariable& dual() const { return dual_; }
  int iterations() const { return iterations_; }

  // Bytes held by the solver state; constant across iterations.
  std::size_t StateBytes() const;

 private:
  const GameModel& model_;
  const Regularizer& reg_;
  double learning_rate_;
  DualVariable dual_;
  Policy policy_;
  DistributionFlow flow_;
  int iterations_ = 0;
};

enum class FpSchedule { kDecreasing, kDamped, kFixedPoint };

// Discrete Fictitious Play on the average policy / average flow pair.
class FictitiousPlay {
 public:
  FictitiousPlay(const GameModel& model, FpSchedule schedule, double alpha);

  // Mixing weight used by the update with index t (0-based).
  double StepSize(int t) const;

  // Performs one update and returns the mixing weight it used.
  double Step();

  const Policy& average_policy() const { return average_policy_; }
  const DistributionFlow& average_flow() const { return average_flow_; }
  const Policy& best_response() const { return best_response_; }
  const DistributionFlow& best_response_flow() const {
    return best_response_flow_;
  }
  int iterations() const { return iterations_; }

  std::size_t StateBytes() const;

 private:
  const GameModel& model_;
  FpSchedule schedule_;
  double alpha_;
  Policy best_response_;
  Policy average_policy_;
  DistributionFlow best_response_flow_;
  DistributionFlow average_flow_;
  int iterations_ = 0;
};

// Per-cell merge of the average policy with a best response.
//   (1-a) mu(x) pi(a|x) + a mu_br(x) pi_br(a|x)
//   ----------------------------------------  ; uniform if the denominator
//        (1-a) mu(x) + a mu_br(x)                is zero.
void MergePolicies(double alpha, const DistributionFlow& average_flow,
                   const DistributionFlow& br_flow, const Policy& br,
                   Policy& average);

// Runs the configured algorithm on any model. `reg` is used by OMD only.
// The similarity diagnostic is only available through OmdSolve.
SolverRun Solve(const GameModel& model, const Regularizer& reg,
                const SolverConfig& config, const SolveOptions& options = {});

SolverRun OmdSolve(const GameSpec& spec, const Regularizer& reg,
                   const SolverConfig& config,
                   const SolveOptions& options = {});

SolverRun FpSolve(const GameSpec& spec, const SolverConfig& config,
                  const SolveOptions& options = {});

SolverRun OmdSolveWithNoise(const NoiseGame& game, const Regularizer& reg,
                            const SolverConfig& config,
                            const SolveOptions& options = {});

// Iteration log as CSV: iteration, phi_total, phi_pop_0.., elapsed_seconds
// and optionally h_diag. Numbers use the shortest round-trip form.
void WriteRunCsv(const SolverRun& run, std::ostream& out,
                 bool include_h = false);
void WriteRecordsCsv(const std::vector<IterationRecord>& records,
                     int num_populations, std::ostream& out,
                     bool include_h = false);
std::vector<IterationRecord> ReadRunCsv(std::istream& in);

// Trailing moving average with the given window (shorter at the start).
std::vector<double> SmoothTrace(const std::vector<double>& values, int window);

}  // namespace mfg

#endif  // MFG_SOLVERS_H_
