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

#ifndef AKREL_ENGINES_HPP
#define AKREL_ENGINES_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "akrel/design_pool.hpp"
#include "akrel/kriging.hpp"
#include "akrel/random_models.hpp"

namespace akrel {

enum class Method { kMcs, kAkMcs, kIskra, kReak };
enum class LearningFunction { kEff, kU };

std::string to_string(Method method);
/// Accepts "MCS", "AKMCS"/"AK-MCS", "ISKRA", "REAK" (case-insensitive).
Method method_from_string(const std::string& name);
std::string to_string(LearningFunction lf);
LearningFunction learning_function_from_string(const std::string& name);

/// Limit-state function: g(x) <= 0 is failure. Must be safe to call from the
/// engine's thread; engines call it sequentially.
using LimitState = std::function<double(std::span<const double>)>;

struct EngineConfig {
  Method method = Method::kReak;
  LearningFunction learning = LearningFunction::kEff;
  double eps_thr = 0.05;
  double cov_thr = 0.05;
  std::size_t n_pool_initial = 10000;
  std::size_t n_pool_increment = 10000;
  std::size_t n_initial_train = 12;
  double eff_stop = 1e-3;
  double u_stop = 2.0;
  double gamma = 5.0;
  double delta_alpha = 0.01;
  double confidence_q = 0.05;
  double alpha_ci = 1.96;
  std::uint64_t seed = 1;
  std::size_t max_calls = 2000;
  /// Pool growth stops (and the run is flagged) beyond this many points.
  std::size_t max_pool = 5'000'000;
  /// Sample count for crude Monte Carlo.
  std::size_t n_mcs = 1'000'000;
  FitOptions fit;

  /// Throws Error(kConfig) naming the offending field.
  void validate() const;
};

/// One learning iteration or stage transition.
struct TraceRecord {
  std::size_t iteration = 0;
  std::string event;  ///< "learn", "stop", "expand", "grow"
  std::size_t n_calls = 0;
  std::size_t pool_size = 0;
  double alpha = 0.0;
  std::size_t n_omega2 = 0;
  double score = 0.0;     ///< best EFF (or smallest U) in the ESR
  double eps_max = -1.0;  ///< -1 when not evaluated at this record
  double pf_hat = 0.0;
  std::size_t selected = 0;
};

struct RunReport {
  Method method = Method::kReak;
  std::uint64_t seed = 0;
  double pf_hat = 0.0;
  double cov_pf = 0.0;
  std::size_t n_initial = 0;
  std::size_t n_adaptive = 0;
  std::size_t n_calls = 0;
  std::optional<double> eps_max_hat;
  double alpha_final = 0.0;
  double alpha_initial = 0.0;
  std::size_t pool_size = 0;
  std::size_t pool_growths = 0;
  bool converged = true;
  std::string flag;  ///< empty unless the run is flagged
  std::vector<double> theta;
  double beta = 0.0;
  double sigma2 = 0.0;
  double nugget = 0.0;
  std::size_t clamped_variances = 0;
  std::optional<double> pf_pool_oracle;  ///< true-g failure fraction on the final pool
  std::optional<double> true_eps;
  std::uint64_t pool_fingerprint = 0;
  std::vector<std::size_t> initial_training;  ///< pool indices
  double wall_time = 0.0;
  std::vector<TraceRecord> trace;

  bool flagged() const noexcept { return !flag.empty(); }
  /// "a + b" for surrogate methods, the sample count for MCS.
  std::string n_calls_text() const;
};

/// Report plus the final pool and training set (for plots and oracles).
struct RunOutcome {
  RunReport report;
  std::optional<DesignPool> pool;
  Eigen::MatrixXd train_x;
  Eigen::VectorXd train_y;
};

/// sqrt((1 - pf) / (pf n)); +infinity when pf == 0.
double cov_of_pf(double pf, std::size_t n);

/// |pf_hat / pf_ref - 1|. Throws Error(kDomain) if pf_ref <= 0.
double true_error_vs_oracle(double pf_hat, double pf_ref);

/// Plain Monte Carlo on n i.i.d. samples. Throws Error(kEvaluator) with the
/// sample index if g returns a non-finite value.
RunReport crude_mcs(const LimitState& g, const RandomVector& rv, std::size_t n,
                    std::uint64_t seed);

/// Fraction of the pool with g <= 0, evaluating g on every row.
double pool_failure_fraction(const LimitState& g, const SampleMatrix& samples);

RunOutcome run_ak_mcs(const LimitState& g, const RandomVector& rv, const EngineConfig& cfg);
RunOutcome run_iskra(const LimitState& g, const RandomVector& rv, const EngineConfig& cfg);
RunOutcome run_reak(const LimitState& g, const RandomVector& rv, const EngineConfig& cfg);
/// Dispatches on cfg.method.
RunOutcome run_engine(const LimitState& g, const RandomVector& rv, const EngineConfig& cfg);

}  // namespace akrel

#endif  // AKREL_ENGINES_HPP
