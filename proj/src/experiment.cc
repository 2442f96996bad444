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

#include "mfg/experiment.h"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "mfg/csv.h"
#include "mfg/errors.h"
#include "mfg/mirror.h"

namespace mfg {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

[[noreturn]] void ConfigError(const std::string& what) {
  Fail(ErrorCode::kConfig, what);
}

int CheckedInt(std::int64_t v, const std::string& key) {
  if (v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max()) {
    ConfigError("config key '" + key + "' out of range");
  }
  return static_cast<int>(v);
}

int EnvInt(const ConfigDocument& doc, const std::string& key, int fallback) {
  return CheckedInt(doc.GetInt("environment", key, fallback),
                    "environment." + key);
}

double EnvDouble(const ConfigDocument& doc, const std::string& key,
                 double fallback) {
  return doc.GetDouble("environment", key, fallback);
}

GridWrap ParseWrap(const std::string& name) {
  if (name == "torus") return GridWrap::kTorus;
  if (name == "square") return GridWrap::kSquare;
  ConfigError("environment.wrap must be \"torus\" or \"square\"");
}

GridTopology ReadTopology(const ConfigDocument& doc, int width, int height,
                          const std::string& wrap) {
  GridTopology t;
  t.width = EnvInt(doc, "width", width);
  t.height = EnvInt(doc, "height", height);
  t.wrap = ParseWrap(doc.GetString("environment", "wrap", wrap));
  if (doc.GetBool("environment", "donut", false)) {
    const double penalty = EnvDouble(doc, "donut_penalty", -1.0);
    t.donut = GridTopology::Donut(t.width, t.height, penalty).donut;
  }
  return t;
}

Environment BuildFromBuilder(const ConfigDocument& doc,
                             const std::string& builder, std::uint64_t seed) {
  Environment env;
  if (builder == "garnet") {
    GarnetParams p;
    p.n_x = EnvInt(doc, "n_x", p.n_x);
    p.n_a = EnvInt(doc, "n_a", p.n_a);
    p.n_b = EnvInt(doc, "n_b", p.n_b);
    p.s_f = EnvInt(doc, "s_f", p.s_f);
    p.eta = EnvDouble(doc, "eta", p.eta);
    p.horizon = EnvInt(doc, "horizon", p.horizon);
    p.seed = seed;
    env.spec = BuildGarnet(p);
  } else if (builder == "grid") {
    const GridTopology t = ReadTopology(doc, 10, 10, "torus");
    env.spec = BuildGrid(t, EnvDouble(doc, "eta", 1.0),
                         EnvInt(doc, "horizon", 10));
  } else if (builder == "building") {
    BuildingParams p;
    p.floors = EnvInt(doc, "floors", p.floors);
    p.floor_width = EnvInt(doc, "floor_width", p.floor_width);
    p.floor_height = EnvInt(doc, "floor_height", p.floor_height);
    p.horizon = EnvInt(doc, "horizon", p.horizon);
    p.eta = EnvDouble(doc, "eta", p.eta);
    p.arrival_bonus = EnvDouble(doc, "arrival_bonus", p.arrival_bonus);
    p.clip_floor = EnvDouble(doc, "clip_floor", p.clip_floor);
    env.spec = BuildBuilding(p);
  } else if (builder == "beach_bar") {
    BeachBarParams p;
    p.side = EnvInt(doc, "side", p.side);
    p.shift_period = EnvInt(doc, "shift_period", p.shift_period);
    p.num_shifts = EnvInt(doc, "num_shifts", p.num_shifts);
    p.bar_reward = EnvDouble(doc, "bar_reward", p.bar_reward);
    p.shift_step = EnvInt(doc, "shift_step", p.shift_step);
    NoiseGame game = BuildBeachBarNoise(p);
    env.spec = game.spec;
    if (doc.GetBool("environment", "noise", true)) env.noise = std::move(game);
  } else if (builder == "chasing") {
    ChasingParams p;
    p.num_populations = EnvInt(doc, "populations", p.num_populations);
    p.topology = ReadTopology(doc, 15, 15, "torus");
    const std::string init = doc.GetString("environment", "init", "corners");
    if (init == "corners") {
      p.init = ChasingInit::kCorners;
    } else if (init == "random") {
      p.init = ChasingInit::kRandom;
    } else {
      ConfigError("environment.init must be \"corners\" or \"random\"");
    }
    p.horizon = EnvInt(doc, "horizon", p.horizon);
    p.seed = seed;
    const std::vector<double> matrix =
        doc.GetDoubleList("environment", "matrix");
    if (!matrix.empty()) p.matrix = ChasingMatrix(p.num_populations, matrix);
    env.spec = BuildChasing(p);
  } else {
    ConfigError("unknown environment builder '" + builder + "'");
  }
  return env;
}

std::string Timestamp(bool reproducible) {
  if (reproducible) return "1970-01-01T00:00:00Z";
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

Json ValueToJson(const ConfigValue& v) {
  switch (v.kind) {
    case ConfigValue::Kind::kBool: return v.boolean;
    case ConfigValue::Kind::kInt: return v.integer;
    case ConfigValue::Kind::kFloat: return v.number;
    case ConfigValue::Kind::kString: return v.text;
    case ConfigValue::Kind::kArray: {
      Json arr = Json::array();
      for (const ConfigValue& item : v.items) arr.push_back(ValueToJson(item));
      return arr;
    }
  }
  return nullptr;
}

Json DocumentToJson(const ConfigDocument& doc) {
  Json out = Json::object();
  for (const auto& [name, entries] : doc.sections()) {
    Json section = Json::object();
    for (const auto& [key, value] : entries) section[key] = ValueToJson(value);
    if (name.empty()) {
      for (auto& [k, v] : section.items()) out[k] = v;
    } else {
      out[name] = section;
    }
  }
  return out;
}

void EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    Fail(ErrorCode::kIo, "cannot create output directory '" + dir + "'");
  }
}

std::ofstream OpenOutput(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  return out;
}

void CloseOutput(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) Fail(ErrorCode::kIo, "error writing '" + path.string() + "'");
}

std::string Join(const std::string& prefix, const std::string& name) {
  return prefix.empty() ? name : prefix + "/" + name;
}

struct SeedResult {
  std::vector<IterationRecord> records;
  double final_exploitability = 0.0;
  int num_populations = 1;
  bool has_h = false;
};

SeedResult RunSeed(const ExperimentConfig& config, std::uint64_t seed,
                   const std::string& root, const std::string& prefix,
                   std::vector<std::string>& files) {
  const fs::path dir = fs::path(root) / prefix;
  EnsureDirectory(dir.string());
  const Environment env = BuildEnvironment(config, seed);
  const NoiseTree* tree = env.noise ? &env.noise->tree : nullptr;

  SolverConfig solver = config.solver;
  solver.seed = seed;

  SolveOptions options;
  options.record_timing = !config.reproducible;
  options.on_snapshot = [&](int iteration, const Policy&,
                            const DistributionFlow& flow) {
    for (const std::string& name :
         ExportSnapshot(flow, env.spec.layout, tree, iteration,
                        config.snapshot_timesteps, dir.string())) {
      files.push_back(Join(prefix, name));
    }
  };

  const EntropyRegularizer reg;
  std::optional<Policy> reference;
  SolverRun run;
  if (env.noise) {
    NoiseModel model(*env.noise);
    run = Solve(model, reg, solver, options);
  } else if (solver.algorithm == Algorithm::kOmd &&
             config.h_reference_iterations > 0) {
    SolverConfig ref_config = solver;
    ref_config.max_iterations = config.h_reference_iterations;
    ref_config.exploitability_every = config.h_reference_iterations;
    ref_config.snapshot_iterations.clear();
    ref_config.snapshot_final = false;
    reference = OmdSolve(env.spec, reg, ref_config).final_policy;
    options.reference_policy = &*reference;
    run = OmdSolve(env.spec, reg, solver, options);
  } else {
    PlainModel model(env.spec);
    run = Solve(model, reg, solver, options);
  }

  SeedResult result;
  result.num_populations = run.num_populations;
  result.records = run.records;
  result.has_h = reference.has_value();
  if (!run.records.empty()) {
    result.final_exploitability = run.records.back().phi_total;
  } else if (env.noise) {
    result.final_exploitability =
        NoiseModel(*env.noise).Exploit(run.final_policy).total;
  } else {
    result.final_exploitability =
        PlainModel(env.spec).Exploit(run.final_policy).total;
  }

  {
    const fs::path path = dir / "exploitability.csv";
    std::ofstream out = OpenOutput(path);
    WriteRecordsCsv(run.records, run.num_populations, out, false);
    CloseOutput(out, path);
    files.push_back(Join(prefix, "exploitability.csv"));
  }
  if (result.has_h) {
    const fs::path path = dir / "h_diag.csv";
    std::ofstream out = OpenOutput(path);
    out << "iteration,h_diag\r\n";
    for (const IterationRecord& r : run.records) {
      out << r.iteration << ',' << FormatDouble(r.h_diag.value_or(NAN))
          << "\r\n";
    }
    CloseOutput(out, path);
    files.push_back(Join(prefix, "h_diag.csv"));
  }
  {
    const fs::path path = dir / "flow_final.csv";
    std::ofstream out = OpenOutput(path);
    WriteFlowCsv(run.final_flow, tree, out);
    CloseOutput(out, path);
    files.push_back(Join(prefix, "flow_final.csv"));
  }
  return result;
}

void WritePgm(const fs::path& path, const std::vector<double>& values,
              int rows, int cols) {
  double max_value = 0.0;
  for (double v : values) max_value = std::max(max_value, v);
  std::ofstream out = OpenOutput(path);
  out << "P5\n" << cols << ' ' << rows << "\n65535\n";
  std::string pixels;
  pixels.reserve(values.size() * 2);
  for (double v : values) {
    const long level =
        max_value > 0.0 ? std::lround(v / max_value * 65535.0) : 0L;
    const auto clamped = static_cast<std::uint16_t>(
        std::clamp<long>(level, 0L, 65535L));
    pixels.push_back(static_cast<char>(clamped >> 8));
    pixels.push_back(static_cast<char>(clamped & 0xff));
  }
  out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
  CloseOutput(out, path);
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNumeric:
    case ErrorCode::kNumericConsistency:
    case ErrorCode::kDomain:
      return 3;
    default:
      return 2;
  }
}

ExperimentConfig InterpretConfig(ConfigDocument document) {
  ExperimentConfig config;
  const ConfigDocument& doc = document;
  static const std::vector<std::string> kSections = {
      "environment", "algorithm", "output", "seeds", "diagnostics",
      "monotonicity"};
  for (const auto& [name, entries] : doc.sections()) {
    if (name.empty() && !entries.empty()) {
      ConfigError("config keys must live in a [section]");
    }
    if (!name.empty() &&
        std::find(kSections.begin(), kSections.end(), name) ==
            kSections.end()) {
      ConfigError("unknown config section [" + name + "]");
    }
  }

  config.preset = doc.GetString("environment", "preset", "");
  config.builder = doc.GetString("environment", "builder", "");
  if (config.preset.empty() == config.builder.empty()) {
    ConfigError("[environment] needs exactly one of preset or builder");
  }
  if (!config.preset.empty()) {
    const auto names = DeskPresetNames();
    if (std::find(names.begin(), names.end(), config.preset) == names.end()) {
      ConfigError("unknown preset '" + config.preset + "'");
    }
  }

  SolverConfig& s = config.solver;
  s.algorithm = ParseAlgorithm(doc.GetString("algorithm", "name", "omd"));
  s.learning_rate = doc.GetDouble(
      "algorithm", "learning_rate",
      s.algorithm == Algorithm::kFpDecreasing ||
              s.algorithm == Algorithm::kFixedPoint
          ? 1.0
          : 0.1);
  s.max_iterations = CheckedInt(
      doc.GetInt("algorithm", "max_iterations", s.max_iterations),
      "algorithm.max_iterations");
  s.exploitability_every = CheckedInt(
      doc.GetInt("algorithm", "exploitability_every", 0),
      "algorithm.exploitability_every");

  config.output_dir = doc.GetString("output", "dir", config.output_dir);
  config.reproducible = doc.GetBool("output", "reproducible", false);
  if (const ConfigValue* snaps = doc.Find("output", "snapshots")) {
    auto take = [&](const ConfigValue& v) {
      if (v.kind == ConfigValue::Kind::kString && v.text == "final") {
        s.snapshot_final = true;
      } else if (v.kind == ConfigValue::Kind::kInt) {
        s.snapshot_iterations.push_back(
            CheckedInt(v.integer, "output.snapshots"));
      } else {
        ConfigError("output.snapshots takes iterations and/or \"final\"");
      }
    };
    if (snaps->kind == ConfigValue::Kind::kArray) {
      for (const ConfigValue& v : snaps->items) take(v);
    } else {
      take(*snaps);
    }
  }
  for (std::int64_t t : doc.GetIntList("output", "snapshot_timesteps")) {
    config.snapshot_timesteps.push_back(
        CheckedInt(t, "output.snapshot_timesteps"));
  }

  const bool has_seed = doc.Has("seeds", "seed");
  const bool has_sweep = doc.Has("seeds", "sweep");
  if (has_seed && has_sweep) ConfigError("[seeds] takes seed or sweep, not both");
  std::vector<std::int64_t> seeds =
      has_sweep ? doc.GetIntList("seeds", "sweep")
                : std::vector<std::int64_t>{doc.GetInt("seeds", "seed", 0)};
  if (seeds.empty()) ConfigError("seeds.sweep is empty");
  config.seeds.clear();
  for (std::int64_t v : seeds) {
    if (v < 0) ConfigError("seeds must be non-negative");
    if (std::find(config.seeds.begin(), config.seeds.end(),
                  static_cast<std::uint64_t>(v)) != config.seeds.end()) {
      ConfigError("duplicate seed in sweep");
    }
    config.seeds.push_back(static_cast<std::uint64_t>(v));
  }

  config.h_reference_iterations = CheckedInt(
      doc.GetInt("diagnostics", "h_reference_iterations", 0),
      "diagnostics.h_reference_iterations");
  if (config.h_reference_iterations < 0) {
    ConfigError("diagnostics.h_reference_iterations must be >= 0");
  }
  config.monotonicity_samples = CheckedInt(
      doc.GetInt("monotonicity", "samples", config.monotonicity_samples),
      "monotonicity.samples");
  if (config.monotonicity_samples <= 0) {
    ConfigError("monotonicity.samples must be positive");
  }
  const std::int64_t mono_seed = doc.GetInt("monotonicity", "seed", 0);
  if (mono_seed < 0) ConfigError("monotonicity.seed must be non-negative");
  config.monotonicity_seed = static_cast<std::uint64_t>(mono_seed);

  // Building once validates builder parameters and flags unused keys.
  if (config.preset.empty()) {
    BuildFromBuilder(doc, config.builder, config.seeds.front());
  } else {
    BuildDeskPreset(config.preset, config.seeds.front());
  }
  const std::vector<std::string> unread = doc.UnreadKeys();
  if (!unread.empty()) ConfigError("unknown config key '" + unread[0] + "'");

  config.solver.Validate();
  config.document = std::move(document);
  return config;
}

ExperimentConfig ParseExperimentConfig(const std::string& text) {
  return InterpretConfig(ConfigDocument::Parse(text));
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  return InterpretConfig(ConfigDocument::Load(path));
}

Environment BuildEnvironment(const ExperimentConfig& config,
                             std::uint64_t seed) {
  if (!config.preset.empty()) return BuildDeskPreset(config.preset, seed);
  return BuildFromBuilder(config.document, config.builder, seed);
}

RunSummary RunExperiment(const ExperimentConfig& config) {
  const std::string started = Timestamp(config.reproducible);
  EnsureDirectory(config.output_dir);
  RunSummary summary;
  std::vector<std::vector<IterationRecord>> traces;
  int num_populations = 1;
  for (std::uint64_t seed : config.seeds) {
    const std::string prefix =
        config.sweep() ? "seed_" + std::to_string(seed) : "";
    SeedResult r = RunSeed(config, seed, config.output_dir, prefix,
                           summary.files);
    summary.final_exploitability.push_back(r.final_exploitability);
    traces.push_back(std::move(r.records));
    num_populations = r.num_populations;
  }
  if (config.sweep()) {
    const fs::path path = fs::path(config.output_dir) / "exploitability_mean.csv";
    std::ofstream out = OpenOutput(path);
    WriteRecordsCsv(AverageRecords(traces), num_populations, out, false);
    CloseOutput(out, path);
    summary.files.push_back("exploitability_mean.csv");
  }

  std::sort(summary.files.begin(), summary.files.end());
  Json manifest = Json::object();
  manifest["tool"] = "mfg";
  manifest["version"] = kVersion;
  manifest["config"] = DocumentToJson(config.document);
  manifest["started"] = started;
  manifest["finished"] = Timestamp(config.reproducible);
  Json files = Json::array();
  for (const std::string& name : summary.files) {
    const fs::path path = fs::path(config.output_dir) / name;
    files.push_back({{"path", name},
                     {"bytes", fs::file_size(path)},
                     {"sha256", Sha256Hex(path.string())}});
  }
  manifest["files"] = files;
  Json finals = Json::object();
  double mean = 0.0;
  for (std::size_t k = 0; k < config.seeds.size(); ++k) {
    finals[std::to_string(config.seeds[k])] = summary.final_exploitability[k];
    mean += summary.final_exploitability[k];
  }
  mean /= static_cast<double>(config.seeds.size());
  manifest["final_exploitability"] = {{"mean", mean}, {"per_seed", finals}};

  const fs::path path = fs::path(config.output_dir) / "manifest.json";
  std::ofstream out = OpenOutput(path);
  out << manifest.dump(2) << "\n";
  CloseOutput(out, path);
  return summary;
}

MonotonicityReport CheckMonotone(const ExperimentConfig& config) {
  const Environment env = BuildEnvironment(config, config.seeds.front());
  if (env.noise) {
    return CheckWeakMonotonicity(*env.noise, config.monotonicity_samples,
                                 config.monotonicity_seed);
  }
  return CheckWeakMonotonicity(env.spec, config.monotonicity_samples,
                               config.monotonicity_seed);
}

std::string MonotonicityReportJson(const MonotonicityReport& report) {
  Json j = Json::object();
  j["samples"] = report.samples;
  j["worst"] = report.worst;
  j["tolerance"] = kMonotonicityTolerance;
  j["verdict"] = report.verdict;
  if (report.violating_pair) {
    const MonotonicityPair& p = *report.violating_pair;
    j["violating_pair"] = {{"time", p.time},
                           {"variant", p.variant},
                           {"rho", p.rho},
                           {"rho_prime", p.rho_prime}};
  } else {
    j["violating_pair"] = nullptr;
  }
  return j.dump(2);
}

std::string MemoryEstimateJson(const MemoryEstimate& e) {
  Json j = Json::object();
  j["algorithm"] = e.algorithm;
  j["scalar_bytes"] = e.scalar_bytes;
  j["state_count"] = e.state_count.str();
  j["pair_count"] = e.pair_count.str();
  j["total_bytes"] = e.total_bytes.str();
  j["human"] = e.human;
  return j.dump(2);
}

void WriteFlowCsv(const DistributionFlow& flow, const NoiseTree* tree,
                  std::ostream& out) {
  out << "population,timestep,node,state,probability\r\n";
  for (int i = 0; i < flow.num_populations(); ++i) {
    const int depths = tree ? tree->horizon() + 1 : flow.num_slots();
    for (int n = 0; n < depths; ++n) {
      const int nodes = tree ? tree->num_nodes(n) : 1;
      for (int k = 0; k < nodes; ++k) {
        const int slot = tree ? tree->Slot(n, k) : n;
        for (int x = 0; x < flow.num_states(); ++x) {
          out << i << ',' << n << ',' << k << ',' << x << ','
              << FormatDouble(flow(i, slot, x)) << "\r\n";
        }
      }
    }
  }
}

DistributionFlow ReadFlowCsv(std::istream& in, int num_populations,
                             int num_states, const NoiseTree* tree,
                             int horizon) {
  const int slots = tree ? tree->total_nodes() : horizon + 1;
  DistributionFlow flow(num_populations, slots, num_states);
  std::vector<char> seen(flow.values().size(), 0);
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kIo, "flow csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "population,timestep,node,state,probability") {
    Fail(ErrorCode::kIo, "flow csv: unexpected header");
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = SplitCsvLine(line);
    if (f.size() != 5) Fail(ErrorCode::kIo, "flow csv: row width mismatch");
    const int i = ParseInt(f[0]);
    const int n = ParseInt(f[1]);
    const int k = ParseInt(f[2]);
    const int x = ParseInt(f[3]);
    const bool in_range =
        i >= 0 && i < num_populations && n >= 0 && n <= horizon && x >= 0 &&
        x < num_states && k >= 0 && (tree ? k < tree->num_nodes(n) : k == 0);
    if (!in_range) {
      Fail(ErrorCode::kStructure, "flow csv: index outside the environment");
    }
    const int slot = tree ? tree->Slot(n, k) : n;
    flow(i, slot, x) = ParseDouble(f[4]);
    seen[(static_cast<std::size_t>(i) * slots + slot) * num_states + x] = 1;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    Fail(ErrorCode::kStructure, "flow csv does not cover the environment");
  }
  return flow;
}

std::vector<std::string> ExportSnapshot(const DistributionFlow& flow,
                                        const GridLayout& layout,
                                        const NoiseTree* tree, int iteration,
                                        const std::vector<int>& timesteps,
                                        const std::string& dir) {
  if (layout.num_cells() != flow.num_states()) {
    Fail(ErrorCode::kStructure, "snapshot layout does not match the flow");
  }
  const int depths = tree ? tree->horizon() + 1 : flow.num_slots();
  if (tree && tree->total_nodes() != flow.num_slots()) {
    Fail(ErrorCode::kStructure, "snapshot tree does not match the flow");
  }
  std::vector<int> steps = timesteps;
  if (steps.empty()) {
    for (int n = 0; n < depths; ++n) steps.push_back(n);
  }
  EnsureDirectory(dir);
  std::vector<std::string> written;
  const int per_floor = layout.rows * layout.cols;
  for (int n : steps) {
    if (n < 0 || n >= depths) {
      Fail(ErrorCode::kStructure, "snapshot timestep outside the horizon");
    }
    const int nodes = tree ? tree->num_nodes(n) : 1;
    for (int k = 0; k < nodes; ++k) {
      const int slot = tree ? tree->Slot(n, k) : n;
      for (int i = 0; i < flow.num_populations(); ++i) {
        for (int f = 0; f < layout.floors; ++f) {
          std::ostringstream stem;
          stem << "snap_t" << iteration << "_n" << n << "_pop" << i;
          if (layout.floors > 1) stem << "_floor" << f;
          if (tree) stem << "_node" << k;
          std::vector<double> values(per_floor);
          for (int c = 0; c < per_floor; ++c) {
            values[c] = flow(i, slot, f * per_floor + c);
          }
          WritePgm(fs::path(dir) / (stem.str() + ".pgm"), values, layout.rows,
                   layout.cols);
          const fs::path csv_path = fs::path(dir) / (stem.str() + ".csv");
          std::ofstream csv = OpenOutput(csv_path);
          csv << "row,col,probability\r\n";
          for (int c = 0; c < per_floor; ++c) {
            csv << c / layout.cols << ',' << c % layout.cols << ','
                << FormatDouble(values[c]) << "\r\n";
          }
          CloseOutput(csv, csv_path);
          written.push_back(stem.str() + ".pgm");
          written.push_back(stem.str() + ".csv");
        }
      }
    }
  }
  return written;
}

std::vector<IterationRecord> AverageRecords(
    const std::vector<std::vector<IterationRecord>>& runs) {
  if (runs.empty()) return {};
  const std::size_t rows = runs.front().size();
  for (const auto& r : runs) {
    if (r.size() != rows) {
      Fail(ErrorCode::kDimension, "traces to average differ in length");
    }
  }
  const double count = static_cast<double>(runs.size());
  std::vector<IterationRecord> mean(rows);
  for (std::size_t k = 0; k < rows; ++k) {
    IterationRecord& m = mean[k];
    m.iteration = runs.front()[k].iteration;
    m.phi_per_population.assign(runs.front()[k].phi_per_population.size(), 0.0);
    for (const auto& run : runs) {
      const IterationRecord& r = run[k];
      if (r.iteration != m.iteration ||
          r.phi_per_population.size() != m.phi_per_population.size()) {
        Fail(ErrorCode::kDimension, "traces to average are not aligned");
      }
      m.phi_total += r.phi_total;
      for (std::size_t i = 0; i < r.phi_per_population.size(); ++i) {
        m.phi_per_population[i] += r.phi_per_population[i];
      }
      m.elapsed_seconds += r.elapsed_seconds;
    }
    m.phi_total /= count;
    for (double& v : m.phi_per_population) v /= count;
    m.elapsed_seconds /= count;
  }
  return mean;
}

std::string Sha256Hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot read '" + path + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx, digest, &length);
  EVP_MD_CTX_free(ctx);
  static const char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int k = 0; k < length; ++k) {
    hex.push_back(kHex[digest[k] >> 4]);
    hex.push_back(kHex[digest[k] & 0xf]);
  }
  return hex;
}

}  // namespace mfg
