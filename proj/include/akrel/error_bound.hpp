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

#ifndef AKREL_ERROR_BOUND_HPP
#define AKREL_ERROR_BOUND_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace akrel {

/// Split of the candidate pool into the effective sampling region (omega1,
/// high density) and the excluded low-density remainder (omega2).
///
/// omega2 holds the k = round_half_even(esr_alpha * pf_ref * N) lowest-density
/// points, so that its empirical probability mass is esr_alpha * pf_ref.
struct EsrPartition {
  double esr_alpha = 0.0;
  double pf_ref = 0.0;
  double rho_thr = 0.0;  ///< k-th smallest density (0 when k == 0)
  std::vector<std::size_t> omega1_idx;  ///< ascending pool indices
  std::vector<std::size_t> omega2_idx;  ///< ascending pool indices
  std::vector<std::uint8_t> in_esr;     ///< per-point membership of omega1
  bool degenerate = false;              ///< requested k exceeded N
};

/// Number of excluded points for a pool of n.
std::size_t excluded_count(double esr_alpha, double pf_ref, std::size_t n, bool* clamped = nullptr);

/// Indices sorted by (density, index) ascending.
std::vector<std::size_t> density_order(std::span<const double> density);

EsrPartition build_partition(std::span<const double> density, double esr_alpha, double pf_ref);

/// Same as above with a precomputed density_order().
EsrPartition build_partition(std::span<const double> density,
                             std::span<const std::size_t> ascending_order, double esr_alpha,
                             double pf_ref);

/// Predicted-sign bookkeeping over omega1/omega2 feeding the error bound.
struct WrongSignCounts {
  std::size_t n_omega1_fail = 0;
  std::size_t n_omega2_fail = 0;
  std::vector<double> p_wrong_safe;  ///< omega2 points predicted safe
  std::vector<double> p_wrong_fail;  ///< omega2 points predicted failed
};

enum class QuantileMethod { kExact, kMonteCarlo };

/// Poisson-binomial PMF by O(n^2) convolution.
std::vector<double> poisson_binomial_pmf(std::span<const double> probs);

/// Smallest k with P(sum of Bernoulli(probs) <= k) >= q, 0 < q < 1.
/// kExact convolves the PMF; kMonteCarlo uses mc_draws simulated sums from
/// the (seed, stream_id) substream.
std::size_t poisson_binomial_quantile(std::span<const double> probs, double q,
                                      QuantileMethod method = QuantileMethod::kExact,
                                      std::size_t mc_draws = 100000, std::uint64_t seed = 0,
                                      std::uint64_t stream_id = 0);

/// Normal-approximation interval (max(0, mu - a sd), mu + a sd) for the
/// number of wrong signs among predicted-safe points, with mu = sum p and
/// sd^2 = sum p (1 - p).
std::pair<double, double> safe_wse_interval(std::span<const double> p_wrong_safe,
                                            double alpha_ci = 1.96);

struct ErrorBoundOptions {
  double alpha_ci = 1.96;
  double confidence_q = 0.05;
  std::size_t exact_limit = 1000;  ///< exact Poisson-binomial up to this many points
  std::size_t mc_draws = 100000;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

struct ErrorBound {
  std::pair<double, double> safe_wse_ci{0.0, 0.0};
  std::pair<std::size_t, std::size_t> fail_wse_ci{0, 0};
  std::pair<double, double> n_omega2_fail_range{0.0, 0.0};
  double eps_max = 0.0;
  double confidence_q = 0.05;
  bool exact_quantile = true;
};

/// Worst relative error over the two ends I of the omega2 failure-count
/// range: |N2f - I| / (N1f + I). A zero denominator (no predicted
/// failures) yields 1.
double eps_max_over_range(std::size_t n_omega1_fail, std::size_t n_omega2_fail,
                          std::pair<double, double> range);

/// Range of the true omega2 failure count:
///   [max(0, N2f - fail_upper), N2f + safe_upper].
std::pair<double, double> omega2_fail_range(std::size_t n_omega2_fail, double fail_upper,
                                            double safe_upper);

/// Conservative maximum error rate of the failure-probability estimate.
ErrorBound max_error_rate(const WrongSignCounts& counts, const ErrorBoundOptions& options = {});

}  // namespace akrel

#endif  // AKREL_ERROR_BOUND_HPP
