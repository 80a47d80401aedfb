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

#include "akrel/error_bound.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "akrel/errors.hpp"
#include "akrel/rng.hpp"

namespace akrel {

std::size_t excluded_count(double esr_alpha, double pf_ref, std::size_t n, bool* clamped) {
  if (!(esr_alpha >= 0.0) || !(pf_ref >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "partition needs esr_alpha >= 0 and pf_ref >= 0");
  }
  // Ties round to even (nearbyint under the default rounding mode).
  const double k = std::nearbyint(esr_alpha * pf_ref * static_cast<double>(n));
  const bool over = k > static_cast<double>(n);
  if (clamped) *clamped = over;
  return over ? n : static_cast<std::size_t>(k);
}

std::vector<std::size_t> density_order(std::span<const double> density) {
  std::vector<std::size_t> order(density.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return density[a] < density[b] || (density[a] == density[b] && a < b);
  });
  return order;
}

EsrPartition build_partition(std::span<const double> density, double esr_alpha, double pf_ref) {
  const auto order = density_order(density);
  return build_partition(density, order, esr_alpha, pf_ref);
}

EsrPartition build_partition(std::span<const double> density,
                             std::span<const std::size_t> ascending_order, double esr_alpha,
                             double pf_ref) {
  if (ascending_order.size() != density.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "build_partition: order/density size mismatch");
  }
  const std::size_t n = density.size();
  EsrPartition p;
  p.esr_alpha = esr_alpha;
  p.pf_ref = pf_ref;
  const std::size_t k = excluded_count(esr_alpha, pf_ref, n, &p.degenerate);
  p.rho_thr = k == 0 ? 0.0 : density[ascending_order[k - 1]];
  p.in_esr.assign(n, 1);
  for (std::size_t i = 0; i < k; ++i) p.in_esr[ascending_order[i]] = 0;
  p.omega2_idx.reserve(k);
  p.omega1_idx.reserve(n - k);
  for (std::size_t i = 0; i < n; ++i) {
    (p.in_esr[i] ? p.omega1_idx : p.omega2_idx).push_back(i);
  }
  return p;
}

std::vector<double> poisson_binomial_pmf(std::span<const double> probs) {
  std::vector<double> pmf(probs.size() + 1, 0.0);
  pmf[0] = 1.0;
  std::size_t support = 0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "Bernoulli probabilities must lie in [0, 1]");
    }
    if (p == 0.0) continue;
    ++support;
    for (std::size_t k = support; k > 0; --k) {
      pmf[k] = pmf[k] * (1.0 - p) + pmf[k - 1] * p;
    }
    pmf[0] *= 1.0 - p;
  }
  return pmf;
}

std::size_t poisson_binomial_quantile(std::span<const double> probs, double q,
                                      QuantileMethod method, std::size_t mc_draws,
                                      std::uint64_t seed, std::uint64_t stream_id) {
  if (!(q > 0.0 && q < 1.0)) {
    throw Error(ErrorCode::kDomain, "quantile level must lie in (0, 1)");
  }
  if (method == QuantileMethod::kExact) {
    const auto pmf = poisson_binomial_pmf(probs);
    double cdf = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      cdf += pmf[k];
      if (cdf >= q) return k;
    }
    return probs.size();
  }

  if (mc_draws == 0) throw Error(ErrorCode::kInvalidArgument, "mc_draws must be positive");
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "Bernoulli probabilities must lie in [0, 1]");
    }
  }
  std::vector<double> active;
  for (double p : probs) {
    if (p > 0.0) active.push_back(p);
  }
  Rng rng(seed, stream_id);
  std::vector<std::size_t> histogram(active.size() + 1, 0);
  for (std::size_t draw = 0; draw < mc_draws; ++draw) {
    std::size_t sum = 0;
    for (double p : active) sum += rng.uniform() < p ? 1 : 0;
    ++histogram[sum];
  }
  // Smallest k whose empirical CDF reaches q, compared in integer counts.
  const double needed = q * static_cast<double>(mc_draws);
  std::size_t cumulative = 0;
  for (std::size_t k = 0; k < histogram.size(); ++k) {
    cumulative += histogram[k];
    if (static_cast<double>(cumulative) >= needed) return k;
  }
  return active.size();
}

std::pair<double, double> safe_wse_interval(std::span<const double> p_wrong_safe,
                                            double alpha_ci) {
  double mu = 0.0;
  double var = 0.0;
  for (double p : p_wrong_safe) {
    mu += p;
    var += p * (1.0 - p);
  }
  const double half = alpha_ci * std::sqrt(var);
  return {std::max(0.0, mu - half), mu + half};
}

std::pair<double, double> omega2_fail_range(std::size_t n_omega2_fail, double fail_upper,
                                            double safe_upper) {
  const auto n2f = static_cast<double>(n_omega2_fail);
  return {std::max(0.0, n2f - fail_upper), n2f + safe_upper};
}

double eps_max_over_range(std::size_t n_omega1_fail, std::size_t n_omega2_fail,
                          std::pair<double, double> range) {
  const auto n1f = static_cast<double>(n_omega1_fail);
  const auto n2f = static_cast<double>(n_omega2_fail);
  auto rate = [&](double end) {
    const double num = std::abs(n2f - end);
    const double den = n1f + end;
    // No predicted failures anywhere: report the worst case so refinement continues.
    if (den == 0.0) return 1.0;
    return num / den;
  };
  return std::max(rate(range.first), rate(range.second));
}

ErrorBound max_error_rate(const WrongSignCounts& counts, const ErrorBoundOptions& options) {
  ErrorBound b;
  b.confidence_q = options.confidence_q;
  b.safe_wse_ci = safe_wse_interval(counts.p_wrong_safe, options.alpha_ci);

  const auto& fail = counts.p_wrong_fail;
  b.exact_quantile = fail.size() <= options.exact_limit;
  const auto method = b.exact_quantile ? QuantileMethod::kExact : QuantileMethod::kMonteCarlo;
  const double lo_q = 0.5 * options.confidence_q;
  const double hi_q = 1.0 - 0.5 * options.confidence_q;
  b.fail_wse_ci = {
      poisson_binomial_quantile(fail, lo_q, method, options.mc_draws, options.seed, options.stream_id),
      poisson_binomial_quantile(fail, hi_q, method, options.mc_draws, options.seed, options.stream_id)};

  b.n_omega2_fail_range = omega2_fail_range(
      counts.n_omega2_fail, static_cast<double>(b.fail_wse_ci.second), b.safe_wse_ci.second);
  b.eps_max = eps_max_over_range(counts.n_omega1_fail, counts.n_omega2_fail, b.n_omega2_fail_range);
  return b;
}

}  // namespace akrel
