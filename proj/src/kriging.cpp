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

#include "akrel/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Cholesky>

#include "akrel/errors.hpp"
#include "akrel/rng.hpp"

namespace akrel {

namespace {

constexpr std::size_t kBlock = 256;

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_training(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "Kriging needs at least 2 training points");
  }
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "Kriging: X and y row counts differ");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "Kriging: training data must be finite");
  }
  if (has_duplicate_rows(x)) {
    throw Error(ErrorCode::kInvalidArgument, "Kriging: duplicate training points");
  }
}

// Cholesky of R + nugget I with the nugget schedule; nullopt if every
// attempt fails. A factor whose smallest pivot falls below half the nugget
// has lost precision (exact pivots are >= lambda_min >= nugget).
std::optional<std::pair<Eigen::LLT<Eigen::MatrixXd>, double>> regularized_cholesky(
    const Eigen::MatrixXd& r, const NuggetPolicy& policy) {
  const auto m = static_cast<double>(r.rows());
  if (!(policy.start_per_point > 0.0) || !(policy.growth > 1.0) || !(policy.max > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "nugget policy needs positive start and growth > 1");
  }
  double nugget = std::min(policy.start_per_point * m, policy.max);
  while (true) {
    Eigen::MatrixXd a = r;
    a.diagonal().array() += nugget;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) {
      const auto diag = llt.matrixLLT().diagonal();
      const double min_pivot = diag.minCoeff();
      if (std::isfinite(min_pivot) && min_pivot * min_pivot >= 0.5 * nugget) {
        return std::make_pair(std::move(llt), nugget);
      }
    }
    if (nugget >= policy.max) return std::nullopt;
    nugget = std::min(nugget * policy.growth, policy.max);
  }
}

}  // namespace

double gaussian_correlation(std::span<const double> x, std::span<const double> w,
                            std::span<const double> theta) {
  if (x.size() != w.size() || x.size() != theta.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "gaussian_correlation: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - w[k];
    s += theta[k] * d * d;
  }
  return std::exp(-s);
}

double GlsProfile::concentrated_likelihood() const {
  const auto m = static_cast<double>(resid_weights.size());
  return std::exp(log_det / m) * sigma2;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& x, std::span<const double> theta) {
  const auto m = x.rows();
  const auto d = x.cols();
  if (static_cast<std::size_t>(d) != theta.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "correlation_matrix: theta size mismatch");
  }
  Eigen::MatrixXd r(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    r(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        const double diff = x(i, k) - x(j, k);
        s += theta[static_cast<std::size_t>(k)] * diff * diff;
      }
      r(i, j) = r(j, i) = std::exp(-s);
    }
  }
  return r;
}

GlsProfile profile_beta_sigma2(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                               std::span<const double> theta, const NuggetPolicy& nugget) {
  for (double t : theta) {
    if (!(t > 0.0)) throw Error(ErrorCode::kInvalidArgument, "theta must be positive");
  }
  const Eigen::MatrixXd r = correlation_matrix(x, theta);
  auto factored = regularized_cholesky(r, nugget);
  if (!factored) {
    throw Error(ErrorCode::kIllConditioned,
                "correlation matrix is not positive definite at the maximum nugget");
  }
  auto& [llt, used_nugget] = *factored;
  const auto m = x.rows();

  GlsProfile p;
  p.nugget = used_nugget;
  p.chol_lower = llt.matrixL();
  p.log_det = 2.0 * p.chol_lower.diagonal().array().log().sum();
  p.ones_weights = llt.solve(Eigen::VectorXd::Ones(m));
  p.ones_quad = p.ones_weights.sum();
  p.beta = p.ones_weights.dot(y) / p.ones_quad;
  const Eigen::VectorXd resid = y.array() - p.beta;
  p.resid_weights = llt.solve(resid);
  p.sigma2 = std::max(0.0, resid.dot(p.resid_weights) / static_cast<double>(m));
  p.max_row_sum = (r.array().abs().rowwise().sum()).maxCoeff() + used_nugget;
  return p;
}

bool has_duplicate_rows(const Eigen::MatrixXd& x, double tol) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (((x.row(i) - x.row(j)).array().abs() <= tol).all()) return true;
    }
  }
  return false;
}

bool is_duplicate_of(const Eigen::MatrixXd& x, std::span<const double> point, double tol) {
  const Eigen::Map<const Eigen::RowVectorXd> p(point.data(), static_cast<Eigen::Index>(point.size()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (((x.row(i) - p).array().abs() <= tol).all()) return true;
  }
  return false;
}

void KrigingModel::set_training(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                bool standardize) {
  const auto d = static_cast<std::size_t>(x.cols());
  x_raw_ = x;
  y_ = y;
  shift_.assign(d, 0.0);
  scale_.assign(d, 1.0);
  if (standardize) {
    const auto m = static_cast<double>(x.rows());
    for (std::size_t k = 0; k < d; ++k) {
      const auto col = x.col(static_cast<Eigen::Index>(k));
      const double mu = col.mean();
      const double var = (col.array() - mu).square().sum() / (m - 1.0);
      shift_[k] = mu;
      scale_[k] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
  }
  x_.resize(x.rows(), x.cols());
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    x_.col(k) = (x.col(k).array() - shift_[ku]) / scale_[ku];
  }
}

KrigingModel KrigingModel::with_theta(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                      std::span<const double> theta, bool standardize,
                                      const NuggetPolicy& nugget) {
  check_training(x, y);
  if (theta.size() != static_cast<std::size_t>(x.cols())) {
    throw Error(ErrorCode::kDimensionMismatch, "theta size must equal input dimension");
  }
  KrigingModel model;
  model.set_training(x, y, standardize);
  model.theta_.assign(theta.begin(), theta.end());
  model.profile_ = profile_beta_sigma2(model.x_, y, theta, nugget);
  model.evaluations_ = 1;
  return model;
}

KrigingModel KrigingModel::fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                               const FitOptions& options) {
  check_training(x, y);
  const auto d = static_cast<std::size_t>(x.cols());
  if (!(options.theta_lo > 0.0 && options.theta_lo < options.theta_hi) || options.n_starts < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid hyper-parameter search options");
  }
  KrigingModel model;
  model.set_training(x, y, options.standardize);

  // Search in log(theta). Clamped coordinates map exactly onto the bounds.
  const double log_lo = std::log(options.theta_lo);
  const double log_hi = std::log(options.theta_hi);
  auto to_theta = [&](const std::vector<double>& z) {
    std::vector<double> t(d);
    for (std::size_t k = 0; k < d; ++k) {
      t[k] = z[k] <= log_lo ? options.theta_lo : z[k] >= log_hi ? options.theta_hi : std::exp(z[k]);
    }
    return t;
  };

  const int budget = std::max(1, options.budget_per_dim * static_cast<int>(d));
  const int per_start = std::max(1, budget / options.n_starts);
  int evaluations = 0;

  std::optional<GlsProfile> best_profile;
  std::vector<double> best_theta;
  double best_value = std::numeric_limits<double>::infinity();

  auto evaluate = [&](const std::vector<double>& z, std::optional<GlsProfile>& out) -> double {
    ++evaluations;
    try {
      out = profile_beta_sigma2(model.x_, y, to_theta(z), options.nugget);
      const double v = out->concentrated_likelihood();
      return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kIllConditioned) throw;
      out.reset();
      return std::numeric_limits<double>::infinity();
    }
  };

  Rng rng(options.seed, options.stream_id);
  const double start_log_lo = std::log(options.start_lo);
  const double start_log_hi = std::log(options.start_hi);

  for (int s = 0; s < options.n_starts; ++s) {
    std::vector<double> z(d);
    for (std::size_t k = 0; k < d; ++k) {
      z[k] = start_log_lo + (start_log_hi - start_log_lo) * rng.uniform();
    }
    if (s == 0 && options.warm_start.size() == d) {
      for (std::size_t k = 0; k < d; ++k) {
        z[k] = std::clamp(std::log(std::max(options.warm_start[k], 1e-300)), log_lo, log_hi);
      }
    }
    std::optional<GlsProfile> current;
    double fz = evaluate(z, current);
    int used = 1;
    double step = 1.0;
    // Coordinate pattern search with a shrinking step.
    while (used < per_start && step > 1e-4) {
      bool improved = false;
      for (std::size_t k = 0; k < d && used < per_start; ++k) {
        for (double sign : {1.0, -1.0}) {
          if (used >= per_start) break;
          std::vector<double> trial = z;
          trial[k] = std::clamp(z[k] + sign * step, log_lo, log_hi);
          if (trial[k] == z[k]) continue;
          std::optional<GlsProfile> candidate;
          const double ft = evaluate(trial, candidate);
          ++used;
          if (ft < fz) {
            z = std::move(trial);
            fz = ft;
            current = std::move(candidate);
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (current && fz < best_value) {
      best_value = fz;
      best_theta = to_theta(z);
      best_profile = std::move(current);
    }
  }

  if (!best_profile) {
    throw Error(ErrorCode::kIllConditioned, "every hyper-parameter start was ill-conditioned");
  }
  model.theta_ = std::move(best_theta);
  model.profile_ = std::move(*best_profile);
  model.evaluations_ = evaluations;
  return model;
}

void KrigingModel::standardize_point(std::span<const double> in, double* out) const {
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = (in[k] - shift_[k]) / scale_[k];
}

// r(i, j) = correlation between query row begin + i and training point j.
void KrigingModel::correlations(const SampleMatrix& points, std::size_t begin, std::size_t end,
                                Eigen::MatrixXd& r) const {
  const auto m = x_.rows();
  const std::size_t d = dim();
  if (points.cols() != d) {
    throw Error(ErrorCode::kDimensionMismatch, "predict: point dimension mismatch");
  }
  // Scaled training coordinates, one contiguous row per input dimension.
  RowMajorMatrix t(static_cast<Eigen::Index>(d), m);
  std::vector<double> root_theta(d);
  for (std::size_t k = 0; k < d; ++k) {
    root_theta[k] = std::sqrt(theta_[k]);
    t.row(static_cast<Eigen::Index>(k)) = x_.col(static_cast<Eigen::Index>(k)).transpose() * root_theta[k];
  }
  const auto rows = static_cast<Eigen::Index>(end - begin);
  r.resize(rows, m);
  Eigen::ArrayXd s(m);
  std::vector<double> q(d);
  for (Eigen::Index i = 0; i < rows; ++i) {
    standardize_point(points.row(begin + static_cast<std::size_t>(i)), q.data());
    s.setZero();
    for (std::size_t k = 0; k < d; ++k) {
      s += (t.row(static_cast<Eigen::Index>(k)).transpose().array() - q[k] * root_theta[k]).square();
    }
    r.row(i) = (-s).exp().matrix().transpose();
  }
}

Prediction KrigingModel::predict(std::span<const double> point) const {
  if (point.size() != dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "predict: point dimension mismatch");
  }
  SampleMatrix one(1, dim());
  std::copy(point.begin(), point.end(), one.row(0).begin());
  Prediction p;
  const std::size_t clamped = predict_batch(one, 0, 1, &p.mean, &p.variance);
  p.clamped = clamped > 0;
  return p;
}

std::size_t KrigingModel::predict_batch(const SampleMatrix& points, std::size_t begin,
                                        std::size_t end, double* mean, double* variance) const {
  // Every quantity is computed row by row with fixed-length reductions, so a
  // point's prediction does not depend on how the batch is partitioned.
  std::size_t clamped = 0;
  Eigen::MatrixXd r;
  Eigen::VectorXd ri(static_cast<Eigen::Index>(size()));
  const auto lower = profile_.chol_lower.triangularView<Eigen::Lower>();
  for (std::size_t b = begin; b < end; b += kBlock) {
    const std::size_t e = std::min(end, b + kBlock);
    correlations(points, b, e, r);
    for (std::size_t i = b; i < e; ++i) {
      const auto li = static_cast<Eigen::Index>(i - b);
      ri = r.row(li).transpose();
      mean[i - begin] = profile_.beta + ri.dot(profile_.resid_weights);
      const double u = ri.dot(profile_.ones_weights) - 1.0;
      lower.solveInPlace(ri);
      double var = profile_.sigma2 * (1.0 - ri.squaredNorm() + u * u / profile_.ones_quad);
      if (var < 0.0) {
        var = 0.0;
        ++clamped;
      }
      variance[i - begin] = var;
    }
  }
  return clamped;
}

void KrigingModel::predict_mean_bound(const SampleMatrix& points, std::size_t begin,
                                      std::size_t end, double* mean,
                                      double* variance_upper) const {
  Eigen::MatrixXd r;
  Eigen::VectorXd ri(static_cast<Eigen::Index>(size()));
  const double inv_lambda = 1.0 / profile_.max_row_sum;
  for (std::size_t b = begin; b < end; b += kBlock) {
    const std::size_t e = std::min(end, b + kBlock);
    correlations(points, b, e, r);
    for (std::size_t i = b; i < e; ++i) {
      const auto li = static_cast<Eigen::Index>(i - b);
      ri = r.row(li).transpose();
      mean[i - begin] = profile_.beta + ri.dot(profile_.resid_weights);
      const double u = ri.dot(profile_.ones_weights) - 1.0;
      // r' (R + nugget I)^{-1} r >= ||r||^2 / lambda_max, plus slack for rounding.
      const double var =
          profile_.sigma2 * (1.0 - ri.squaredNorm() * inv_lambda + u * u / profile_.ones_quad);
      variance_upper[i - begin] = std::max(0.0, var) + profile_.sigma2 * 1e-12;
    }
  }
}

}  // namespace akrel
