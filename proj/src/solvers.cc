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

#include "mfg/solvers.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "mfg/csv.h"
#include "mfg/errors.h"
#include "mfg/parallel.h"

namespace mfg {

Policy GameModel::UniformPolicy() const {
  const TableShape s = policy_shape();
  return Policy::Uniform(s.num_populations, s.num_slots, s.num_states,
                         s.num_actions);
}

TableShape PlainModel::policy_shape() const {
  return {spec_.num_populations, spec_.num_timesteps(), spec_.num_states,
          spec_.num_actions};
}
DistributionFlow PlainModel::Flow(const Policy& policy) const {
  return ForwardFlow(spec_, policy);
}
QFunction PlainModel::Evaluate(int pop, const Policy& policy,
                               const DistributionFlow& flow) const {
  return EvaluatePolicy(spec_, pop, policy, flow);
}
BestResponseResult PlainModel::BestRespond(int pop,
                                           const DistributionFlow& flow) const {
  return BestResponse(spec_, pop, flow);
}
ExploitabilityResult PlainModel::Exploit(const Policy& policy) const {
  return Exploitability(spec_, policy);
}

TableShape NoiseModel::policy_shape() const {
  return {game_.spec.num_populations, game_.tree.total_nodes(),
          game_.spec.num_states, game_.spec.num_actions};
}
DistributionFlow NoiseModel::Flow(const Policy& policy) const {
  return ConditionalForwardFlow(game_, policy);
}
QFunction NoiseModel::Evaluate(int pop, const Policy& policy,
                               const DistributionFlow& flow) const {
  return ConditionalEvaluate(game_, pop, policy, flow);
}
BestResponseResult NoiseModel::BestRespond(int pop,
                                           const DistributionFlow& flow) const {
  return ConditionalBestResponse(game_, pop, flow);
}
ExploitabilityResult NoiseModel::Exploit(const Policy& policy) const {
  return ConditionalExploitability(game_, policy);
}

std::string AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kOmd: return "omd";
    case Algorithm::kFpDecreasing: return "fp_decreasing";
    case Algorithm::kFpDamped: return "fp_damped";
    case Algorithm::kFixedPoint: return "fixed_point";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "omd") return Algorithm::kOmd;
  if (name == "fp_decreasing" || name == "fp") return Algorithm::kFpDecreasing;
  if (name == "fp_damped") return Algorithm::kFpDamped;
  if (name == "fixed_point") return Algorithm::kFixedPoint;
  Fail(ErrorCode::kConfig, "unknown algorithm '" + name + "'");
}

void SolverConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    Fail(ErrorCode::kConfig, "learning_rate must be positive");
  }
  if (max_iterations < 0) {
    Fail(ErrorCode::kConfig, "max_iterations must be nonnegative");
  }
  if (exploitability_every < 0) {
    Fail(ErrorCode::kConfig, "exploitability_every must be nonnegative");
  }
  if (algorithm == Algorithm::kFixedPoint && learning_rate != 1.0) {
    Fail(ErrorCode::kConfig, "fixed_point requires learning_rate = 1");
  }
  if (algorithm == Algorithm::kFpDamped && learning_rate > 1.0) {
    Fail(ErrorCode::kConfig, "fp_damped requires learning_rate <= 1");
  }
}

int SolverConfig::ExploitabilityCadence(int num_states) const {
  if (exploitability_every > 0) return exploitability_every;
  return num_states <= 1000 ? 1 : 10;
}

// ---------------------------------------------------------------------------

MirrorDescent::MirrorDescent(const GameModel& model, const Regularizer& reg,
                             double learning_rate)
    : model_(model), reg_(reg), learning_rate_(learning_rate) {
  const TableShape s = model.policy_shape();
  dual_ = DualVariable(s.num_populations, s.num_slots, s.num_states,
                       s.num_actions);
  policy_ = Policy(s.num_populations, s.num_slots, s.num_states,
                   s.num_actions);
  for (int i = 0; i < s.num_populations; ++i) {
    for (int t = 0; t < s.num_slots; ++t) {
      for (int x = 0; x < s.num_states; ++x) {
        reg_.Gamma(dual_.Row(i, t, x), policy_.Row(i, t, x));
      }
    }
  }
}

void MirrorDescent::Step() {
  const TableShape s = policy_.shape();
  flow_ = model_.Flow(policy_);
  ParallelFor(s.num_populations, [&](int pop) {
    const QFunction q = model_.Evaluate(pop, policy_, flow_);
    for (int t = 0; t < s.num_slots; ++t) {
      for (int x = 0; x < s.num_states; ++x) {
        std::span<const double> q_row = q.QRow(t, x);
        std::span<double> y_row = dual_.Row(pop, t, x);
        for (int a = 0; a < s.num_actions; ++a) {
          if (!std::isfinite(q_row[a])) {
            std::ostringstream msg;
            msg << "omd: non-finite Q at (population " << pop << ", time "
                << t << ", state " << x << ", action " << a << ")";
            Fail(ErrorCode::kNumeric, msg.str());
          }
          y_row[a] += learning_rate_ * q_row[a];
        }
      }
    }
  });
  for (int i = 0; i < s.num_populations; ++i) {
    for (int t = 0; t < s.num_slots; ++t) {
      for (int x = 0; x < s.num_states; ++x) {
        reg_.Gamma(dual_.Row(i, t, x), policy_.Row(i, t, x));
      }
    }
  }
  dual_.accumulated_weight += learning_rate_;
  ++iterations_;
}

std::size_t MirrorDescent::StateBytes() const {
  return sizeof(double) *
         (dual_.values().size() + policy_.values().size() +
          flow_.values().size());
}

// ---------------------------------------------------------------------------

FictitiousPlay::FictitiousPlay(const GameModel& model, FpSchedule schedule,
                               double alpha)
    : model_(model), schedule_(schedule), alpha_(alpha) {
  const TableShape s = model.policy_shape();
  best_response_ =
      Policy(s.num_populations, s.num_slots, s.num_states, s.num_actions);
  average_policy_ = model.UniformPolicy();
  average_flow_ = model.Flow(average_policy_);
  best_response_flow_ =
      DistributionFlow(s.num_populations, s.num_slots, s.num_states);
}

double FictitiousPlay::StepSize(int t) const {
  switch (schedule_) {
    case FpSchedule::kDecreasing: return alpha_ / (2.0 + t);
    case FpSchedule::kDamped: return alpha_;
    case FpSchedule::kFixedPoint: return 1.0;
  }
  return alpha_;
}

double FictitiousPlay::Step() {
  const double alpha = StepSize(iterations_);
  const int pops = best_response_.num_populations();
  ParallelFor(pops, [&](int pop) {
    BestResponseResult br = model_.BestRespond(pop, average_flow_);
    best_response_.AssignPopulation(pop, br.policy, 0);
  });
  best_response_flow_ = model_.Flow(best_response_);
  MergePolicies(alpha, average_flow_, best_response_flow_, best_response_,
                average_policy_);
  std::span<double> avg = average_flow_.values();
  std::span<const double> br = best_response_flow_.values();
  for (std::size_t k = 0; k < avg.size(); ++k) {
    avg[k] = (1.0 - alpha) * avg[k] + alpha * br[k];
  }
  ++iterations_;
  return alpha;
}

std::size_t FictitiousPlay::StateBytes() const {
  return sizeof(double) *
         (best_response_.values().size() + average_policy_.values().size() +
          best_response_flow_.values().size() +
          average_flow_.values().size());
}

void MergePolicies(double alpha, const DistributionFlow& average_flow,
                   const DistributionFlow& br_flow, const Policy& br,
                   Policy& average) {
  const int num_actions = average.num_actions();
  for (int i = 0; i < average.num_populations(); ++i) {
    for (int t = 0; t < average.num_slots(); ++t) {
      for (int x = 0; x < average.num_states(); ++x) {
        const double old_mass = (1.0 - alpha) * average_flow(i, t, x);
        const double new_mass = alpha * br_flow(i, t, x);
        const double denominator = old_mass + new_mass;
        std::span<double> row = average.Row(i, t, x);
        if (denominator == 0.0) {
          std::fill(row.begin(), row.end(), 1.0 / num_actions);
          continue;
        }
        std::span<const double> br_row = br.Row(i, t, x);
        for (int a = 0; a < num_actions; ++a) {
          row[a] = (old_mass * row[a] + new_mass * br_row[a]) / denominator;
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

using HMonitor = std::function<double(const DualVariable&)>;

SolverRun SolveImpl(const GameModel& model, const Regularizer& reg,
                    const SolverConfig& config, const SolveOptions& options,
                    const HMonitor& h_monitor) {
  config.Validate();
  const TableShape shape = model.policy_shape();
  const int cadence = config.ExploitabilityCadence(shape.num_states);
  const auto start = std::chrono::steady_clock::now();

  SolverRun run;
  run.config = config;
  run.num_populations = shape.num_populations;

  std::optional<MirrorDescent> omd;
  std::optional<FictitiousPlay> fp;
  switch (config.algorithm) {
    case Algorithm::kOmd:
      omd.emplace(model, reg, config.learning_rate);
      break;
    case Algorithm::kFpDecreasing:
      fp.emplace(model, FpSchedule::kDecreasing, config.learning_rate);
      break;
    case Algorithm::kFpDamped:
      fp.emplace(model, FpSchedule::kDamped, config.learning_rate);
      break;
    case Algorithm::kFixedPoint:
      fp.emplace(model, FpSchedule::kFixedPoint, 1.0);
      break;
  }
  auto current = [&]() -> const Policy& {
    return omd ? omd->policy() : fp->average_policy();
  };

  for (int t = 1; t <= config.max_iterations; ++t) {
    if (omd) {
      omd->Step();
    } else {
      fp->Step();
    }
    const bool last = t == config.max_iterations;
    if (t % cadence == 0 || last) {
      const ExploitabilityResult phi = model.Exploit(current());
      IterationRecord record;
      record.iteration = t;
      record.phi_total = phi.total;
      record.phi_per_population = phi.per_population;
      if (omd && h_monitor) record.h_diag = h_monitor(omd->dual());
      record.elapsed_seconds =
          options.record_timing
              ? std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count()
              : 0.0;
      run.records.push_back(std::move(record));
    }
    const bool scheduled =
        std::find(config.snapshot_iterations.begin(),
                  config.snapshot_iterations.end(),
                  t) != config.snapshot_iterations.end();
    if (options.on_snapshot && (scheduled || (last && config.snapshot_final))) {
      options.on_snapshot(t, current(), model.Flow(current()));
    }
  }
  run.final_policy = omd ? omd->policy() : fp->average_policy();
  run.final_flow = model.Flow(run.final_policy);
  return run;
}

}  // namespace

SolverRun Solve(const GameModel& model, const Regularizer& reg,
                const SolverConfig& config, const SolveOptions& options) {
  return SolveImpl(model, reg, config, options, nullptr);
}

SolverRun OmdSolve(const GameSpec& spec, const Regularizer& reg,
                   const SolverConfig& config, const SolveOptions& options) {
  if (config.algorithm != Algorithm::kOmd) {
    Fail(ErrorCode::kConfig, "OmdSolve requires algorithm = omd");
  }
  PlainModel model(spec);
  HMonitor monitor;
  if (options.reference_policy != nullptr) {
    const Policy* reference = options.reference_policy;
    monitor = [&spec, &reg, reference](const DualVariable& y) {
      return SimilarityToReference(spec, reg, y, *reference);
    };
  }
  return SolveImpl(model, reg, config, options, monitor);
}

SolverRun FpSolve(const GameSpec& spec, const SolverConfig& config,
                  const SolveOptions& options) {
  if (config.algorithm == Algorithm::kOmd) {
    Fail(ErrorCode::kConfig, "FpSolve requires a fictitious play algorithm");
  }
  PlainModel model(spec);
  EntropyRegularizer unused;
  return SolveImpl(model, unused, config, options, nullptr);
}

SolverRun OmdSolveWithNoise(const NoiseGame& game, const Regularizer& reg,
                            const SolverConfig& config,
                            const SolveOptions& options) {
  if (config.algorithm != Algorithm::kOmd) {
    Fail(ErrorCode::kConfig, "OmdSolveWithNoise requires algorithm = omd");
  }
  NoiseModel model(game);
  return SolveImpl(model, reg, config, options, nullptr);
}

// ---------------------------------------------------------------------------

void WriteRecordsCsv(const std::vector<IterationRecord>& records,
                     int num_populations, std::ostream& out, bool include_h) {
  out << "iteration,phi_total";
  for (int i = 0; i < num_populations; ++i) out << ",phi_pop_" << i;
  out << ",elapsed_seconds";
  if (include_h) out << ",h_diag";
  out << "\r\n";
  for (const IterationRecord& r : records) {
    out << r.iteration << ',' << FormatDouble(r.phi_total);
    for (double phi : r.phi_per_population) out << ',' << FormatDouble(phi);
    out << ',' << FormatDouble(r.elapsed_seconds);
    if (include_h) {
      out << ',';
      if (r.h_diag) out << FormatDouble(*r.h_diag);
    }
    out << "\r\n";
  }
}

void WriteRunCsv(const SolverRun& run, std::ostream& out, bool include_h) {
  WriteRecordsCsv(run.records, run.num_populations, out, include_h);
}

std::vector<IterationRecord> ReadRunCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kIo, "run csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = SplitCsvLine(line);
  if (header.size() < 3 || header[0] != "iteration" ||
      header[1] != "phi_total") {
    Fail(ErrorCode::kIo, "run csv: unexpected header");
  }
  int pops = 0;
  while (2 + pops < static_cast<int>(header.size()) &&
         header[2 + pops].rfind("phi_pop_", 0) == 0) {
    ++pops;
  }
  const int elapsed_col = 2 + pops;
  if (elapsed_col >= static_cast<int>(header.size()) ||
      header[elapsed_col] != "elapsed_seconds") {
    Fail(ErrorCode::kIo, "run csv: missing elapsed_seconds column");
  }
  const bool has_h = static_cast<int>(header.size()) > elapsed_col + 1 &&
                     header[elapsed_col + 1] == "h_diag";

  std::vector<IterationRecord> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = SplitCsvLine(line);
    if (f.size() != header.size()) {
      Fail(ErrorCode::kIo, "run csv: row width mismatch");
    }
    IterationRecord r;
    r.iteration = ParseInt(f[0]);
    r.phi_total = ParseDouble(f[1]);
    for (int i = 0; i < pops; ++i) {
      r.phi_per_population.push_back(ParseDouble(f[2 + i]));
    }
    r.elapsed_seconds = ParseDouble(f[elapsed_col]);
    if (has_h && !f[elapsed_col + 1].empty()) {
      r.h_diag = ParseDouble(f[elapsed_col + 1]);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<double> SmoothTrace(const std::vector<double>& values,
                                int window) {
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    sum += values[k];
    if (k >= static_cast<std::size_t>(window)) sum -= values[k - window];
    const std::size_t count =
        std::min<std::size_t>(k + 1, static_cast<std::size_t>(window));
    out[k] = sum / static_cast<double>(count);
  }
  return out;
}

}  // namespace mfg
