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

#ifndef AKREL_RANDOM_MODELS_HPP
#define AKREL_RANDOM_MODELS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace akrel {

inline constexpr double kEulerGamma = 0.57721566490153286061;

enum class MarginalKind { kNormal, kUniform, kGumbel };

/// One-dimensional distribution.
///
/// Normal and Gumbel take (mean, standard deviation); Uniform takes (lower,
/// upper). Gumbel is the maximum-value (type I) law: its location and scale
/// are derived from the moments as scale = std * sqrt(6) / pi and
/// location = mean - gamma_E * scale.
class Marginal {
 public:
  /// Throws Error(kInvalidArgument) on invalid parameters.
  Marginal(MarginalKind kind, double param1, double param2);

  static Marginal normal(double mean, double sd) { return {MarginalKind::kNormal, mean, sd}; }
  static Marginal uniform(double lb, double ub) { return {MarginalKind::kUniform, lb, ub}; }
  static Marginal gumbel(double mean, double sd) { return {MarginalKind::kGumbel, mean, sd}; }

  MarginalKind kind() const noexcept { return kind_; }
  double param1() const noexcept { return p1_; }
  double param2() const noexcept { return p2_; }

  double mean() const noexcept;
  double stddev() const noexcept;

  /// Gumbel location/scale (only meaningful for kGumbel).
  double gumbel_location() const noexcept { return loc_; }
  double gumbel_scale() const noexcept { return scale_; }

  double pdf(double x) const noexcept;
  double cdf(double x) const noexcept;
  /// Throws Error(kDomain) unless 0 < u < 1.
  double inverse_cdf(double u) const;

 private:
  MarginalKind kind_;
  double p1_;
  double p2_;
  double loc_ = 0.0;
  double scale_ = 0.0;
};

std::string to_string(MarginalKind kind);
/// Accepts "normal", "uniform", "gumbel" (case-insensitive).
MarginalKind marginal_kind_from_string(const std::string& name);

/// Joint model of independent marginals.
class RandomVector {
 public:
  explicit RandomVector(std::vector<Marginal> marginals, std::vector<std::string> names = {});

  std::size_t dim() const noexcept { return marginals_.size(); }
  const std::vector<Marginal>& marginals() const noexcept { return marginals_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  /// Product of marginal densities, multiplied left to right in marginal order.
  double joint_pdf(std::span<const double> x) const;

  std::vector<double> mean_point() const;

 private:
  std::vector<Marginal> marginals_;
  std::vector<std::string> names_;
};

/// Row-major block of realizations, one row per design point.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(std::size_t rows, std::size_t cols, std::uint64_t seed = 0)
      : rows_(rows), cols_(cols), seed_(seed), values_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint64_t seed() const noexcept { return seed_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

  const std::vector<double>& values() const noexcept { return values_; }

  /// Appends the rows of other (same column count).
  void append(const SampleMatrix& other);

  bool operator==(const SampleMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> values_;
};

/// Latin Hypercube sample: in each dimension the n probability levels fall
/// one per stratum ((k-1)/n, k/n), strata shuffled independently per
/// dimension, each level placed uniformly within its stratum. `stream_id`
/// selects the RNG substream.
SampleMatrix lhs_sample(const RandomVector& rv, std::size_t n, std::uint64_t seed,
                        std::uint64_t stream_id = 0);

/// i.i.d. inverse-CDF draws.
SampleMatrix plain_sample(const RandomVector& rv, std::size_t n, std::uint64_t seed,
                          std::uint64_t stream_id = 0);

}  // namespace akrel

#endif  // AKREL_RANDOM_MODELS_HPP
