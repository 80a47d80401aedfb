// Copyright 2026 The akrel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AKREL_HARNESS_HPP
#define AKREL_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "akrel/engines.hpp"
#include "akrel/random_models.hpp"

namespace akrel {

/// Named bundle of pool sizes, COV threshold and gamma for one benchmark.
struct Preset {
  std::string name;
  std::string benchmark;
  std::size_t n_pool_initial = 10000;
  std::size_t n_pool_increment = 10000;
  double cov_thr = 0.05;
  double gamma = 5.0;
};

const std::vector<Preset>& presets();
/// Throws Error(kConfig) for an unknown name.
const Preset& preset(const std::string& name);

struct RunConfig {
  std::string benchmark;          ///< empty when an external evaluator is used
  std::string evaluator_command;  ///< run through /bin/sh -c
  std::optional<RandomVector> variables;
  std::string preset;
  EngineConfig engine;
  std::size_t repetitions = 0;
  std::vector<std::uint64_t> seeds;  ///< explicit sweep seeds (optional)
  std::size_t jobs = 1;
  std::vector<Method> compare_methods{Method::kAkMcs, Method::kIskra, Method::kReak};
  std::vector<double> compare_eps;
  std::string output_dir;  ///< empty: no files are written
  bool write_pool_csv = true;
  bool true_error = true;  ///< evaluate g on the final pool for the true error

  const RandomVector& random_vector() const;
};

/// Parses and validates a JSON config. Unknown keys, wrong types and
/// out-of-range values throw Error(kConfig) naming the key.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_string(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Effective configuration with every default filled in.
nlohmann::json config_to_json(const RunConfig& cfg);

/// Limit state for the config: the named benchmark or a subprocess
/// evaluator. Each call returns an independent evaluator.
LimitState make_limit_state(const RunConfig& cfg);

nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

/// Serializes with every double printed to 17 significant digits.
std::string dump_json(const nlohmann::json& j);

std::string trace_csv(const RunReport& report);
/// Columns x1, x2, density, pred_mean, in_esr, evaluated (2-D pools only).
std::string pool_csv(const RunOutcome& outcome);

/// Runs one engine, fills the oracle fields and writes report.json,
/// trace.csv, config.json and (for 2-D problems) pool.csv when an output
/// directory is configured.
RunOutcome run_single(const RunConfig& cfg);

struct SweepRow {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  RunReport report;
};

struct AggregateReport {
  std::vector<SweepRow> rows;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  double mean_calls = 0.0;
  double cov_calls = 0.0;
  std::size_t n_gap = 0;  ///< rows with both eps_max_hat and true_eps
  double mean_gap = 0.0;  ///< mean of eps_max_hat - true_eps
  double cov_gap = 0.0;
  double coverage = 0.0;  ///< fraction with true_eps <= eps_max_hat
};

/// Recomputes every statistic from the rows.
AggregateReport aggregate(std::vector<SweepRow> rows);

/// Runs cfg.repetitions seeds (cfg.seeds, or seed, seed+1, ...) on
/// cfg.jobs worker threads. Throws Error(kConfig) if fewer than 2 seeds or
/// a seed repeats.
AggregateReport run_sweep(const RunConfig& cfg);

nlohmann::json aggregate_to_json(const AggregateReport& agg);
std::string sweep_csv(const AggregateReport& agg);

struct CompareRow {
  Method method = Method::kMcs;
  double eps_thr = 0.0;
  RunReport report;
};

struct CompareTable {
  double pf_pool_oracle = 0.0;  ///< true failure fraction on the shared final pool
  std::vector<CompareRow> rows;
};

/// Runs each method at each eps_thr on the same pool and initial training
/// set. Throws Error(kConfig) if the runs do not share a pool.
CompareTable compare_methods(const RunConfig& cfg);

nlohmann::json compare_to_json(const CompareTable& table);
std::string compare_csv(const CompareTable& table);

}  // namespace akrel

#endif  // AKREL_HARNESS_HPP
