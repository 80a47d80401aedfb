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

#include "akrel/random_models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>

#include "akrel/errors.hpp"
#include "akrel/normal.hpp"
#include "akrel/rng.hpp"

namespace akrel {

Marginal::Marginal(MarginalKind kind, double param1, double param2)
    : kind_(kind), p1_(param1), p2_(param2) {
  if (!std::isfinite(param1) || !std::isfinite(param2)) {
    throw Error(ErrorCode::kInvalidArgument, "marginal parameters must be finite");
  }
  switch (kind) {
    case MarginalKind::kNormal:
    case MarginalKind::kGumbel:
      if (!(param2 > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    to_string(kind) + " marginal requires a positive standard deviation");
      }
      break;
    case MarginalKind::kUniform:
      if (!(param1 < param2)) {
        throw Error(ErrorCode::kInvalidArgument, "uniform marginal requires lower < upper");
      }
      break;
  }
  if (kind == MarginalKind::kGumbel) {
    scale_ = param2 * std::numbers::sqrt3 * std::numbers::sqrt2 / std::numbers::pi;
    loc_ = param1 - kEulerGamma * scale_;
  }
}

double Marginal::mean() const noexcept {
  return kind_ == MarginalKind::kUniform ? 0.5 * (p1_ + p2_) : p1_;
}

double Marginal::stddev() const noexcept {
  return kind_ == MarginalKind::kUniform ? (p2_ - p1_) / std::sqrt(12.0) : p2_;
}

double Marginal::pdf(double x) const noexcept {
  switch (kind_) {
    case MarginalKind::kNormal:
      return normal::pdf((x - p1_) / p2_) / p2_;
    case MarginalKind::kUniform:
      return (x < p1_ || x > p2_) ? 0.0 : 1.0 / (p2_ - p1_);
    case MarginalKind::kGumbel: {
      const double z = (x - loc_) / scale_;
      return std::exp(-(z + std::exp(-z))) / scale_;
    }
  }
  return 0.0;
}

double Marginal::cdf(double x) const noexcept {
  switch (kind_) {
    case MarginalKind::kNormal:
      return normal::cdf((x - p1_) / p2_);
    case MarginalKind::kUniform:
      if (x <= p1_) return 0.0;
      if (x >= p2_) return 1.0;
      return (x - p1_) / (p2_ - p1_);
    case MarginalKind::kGumbel:
      return std::exp(-std::exp(-(x - loc_) / scale_));
  }
  return 0.0;
}

double Marginal::inverse_cdf(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw Error(ErrorCode::kDomain, "inverse_cdf requires 0 < u < 1");
  }
  switch (kind_) {
    case MarginalKind::kNormal:
      return p1_ + p2_ * normal::quantile(u);
    case MarginalKind::kUniform:
      return p1_ + u * (p2_ - p1_);
    case MarginalKind::kGumbel:
      return loc_ - scale_ * std::log(-std::log(u));
  }
  return 0.0;
}

std::string to_string(MarginalKind kind) {
  switch (kind) {
    case MarginalKind::kNormal:
      return "normal";
    case MarginalKind::kUniform:
      return "uniform";
    case MarginalKind::kGumbel:
      return "gumbel";
  }
  return "unknown";
}

MarginalKind marginal_kind_from_string(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "normal") return MarginalKind::kNormal;
  if (lower == "uniform") return MarginalKind::kUniform;
  if (lower == "gumbel") return MarginalKind::kGumbel;
  throw Error(ErrorCode::kInvalidArgument, "unknown marginal kind '" + name + "'");
}

RandomVector::RandomVector(std::vector<Marginal> marginals, std::vector<std::string> names)
    : marginals_(std::move(marginals)), names_(std::move(names)) {
  if (marginals_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "random vector needs at least one marginal");
  }
  if (names_.empty()) {
    for (std::size_t i = 0; i < marginals_.size(); ++i) names_.push_back("x" + std::to_string(i + 1));
  } else if (names_.size() != marginals_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "random vector names/marginals size mismatch");
  }
}

double RandomVector::joint_pdf(std::span<const double> x) const {
  if (x.size() != marginals_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "joint_pdf: point has " + std::to_string(x.size()) + " coordinates, expected " +
                    std::to_string(marginals_.size()));
  }
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) p *= marginals_[i].pdf(x[i]);
  return p;
}

std::vector<double> RandomVector::mean_point() const {
  std::vector<double> m;
  m.reserve(marginals_.size());
  for (const auto& marginal : marginals_) m.push_back(marginal.mean());
  return m;
}

void SampleMatrix::append(const SampleMatrix& other) {
  if (other.empty()) return;
  if (empty() && cols_ == 0) cols_ = other.cols_;
  if (other.cols_ != cols_) {
    throw Error(ErrorCode::kDimensionMismatch, "SampleMatrix::append column mismatch");
  }
  values_.insert(values_.end(), other.values_.begin(), other.values_.end());
  rows_ += other.rows_;
}

SampleMatrix lhs_sample(const RandomVector& rv, std::size_t n, std::uint64_t seed,
                        std::uint64_t stream_id) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "lhs_sample requires n >= 1");
  const std::size_t d = rv.dim();
  SampleMatrix out(n, d, seed);
  Rng rng(seed, stream_id);
  std::vector<std::size_t> perm(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    // Fisher-Yates on our own generator keeps the permutation portable.
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.below(i + 1)]);
    }
    const Marginal& m = rv.marginals()[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (static_cast<double>(perm[i]) + rng.uniform_open()) * inv_n;
      out(i, j) = m.inverse_cdf(std::clamp(u, 0x1.0p-60, 1.0 - 0x1.0p-53));
    }
  }
  return out;
}

SampleMatrix plain_sample(const RandomVector& rv, std::size_t n, std::uint64_t seed,
                          std::uint64_t stream_id) {
  const std::size_t d = rv.dim();
  SampleMatrix out(n, d, seed);
  Rng rng(seed, stream_id);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out(i, j) = rv.marginals()[j].inverse_cdf(rng.uniform_open());
    }
  }
  return out;
}

}  // namespace akrel
