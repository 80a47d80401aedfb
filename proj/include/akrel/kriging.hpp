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

#ifndef AKREL_KRIGING_HPP
#define AKREL_KRIGING_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "akrel/random_models.hpp"

namespace akrel {

/// Separable anisotropic Gaussian kernel: prod_k exp(-theta_k (x_k - w_k)^2).
/// Throws Error(kDimensionMismatch) if the spans differ in length.
double gaussian_correlation(std::span<const double> x, std::span<const double> w,
                            std::span<const double> theta);

/// Diagonal regularization schedule. The first attempt uses
/// start_per_point * m; each failure multiplies by `growth` until `max` has
/// been tried.
struct NuggetPolicy {
  double start_per_point = 1e-12;
  double growth = 10.0;
  double max = 1e-6;
};

/// Generalized-least-squares profile of an ordinary Kriging model at fixed
/// theta: everything the likelihood and the predictor need.
struct GlsProfile {
  double beta = 0.0;
  double sigma2 = 0.0;
  double nugget = 0.0;
  double log_det = 0.0;          ///< log |R + nugget I|
  Eigen::MatrixXd chol_lower;    ///< L with L L^T = R + nugget I
  Eigen::VectorXd resid_weights; ///< R^{-1} (y - beta 1)
  Eigen::VectorXd ones_weights;  ///< R^{-1} 1
  double ones_quad = 0.0;        ///< 1^T R^{-1} 1
  double max_row_sum = 0.0;      ///< Gershgorin bound on the largest eigenvalue of R + nugget I

  /// psi(theta) = |R|^{1/m} sigma^2.
  double concentrated_likelihood() const;
};

/// Correlation matrix of the rows of x (no nugget).
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& x, std::span<const double> theta);

/// beta = (1'R^-1 1)^-1 1'R^-1 y, sigma2 = (y - beta)'R^-1(y - beta) / m.
/// Throws Error(kIllConditioned) if no nugget in the schedule yields a
/// usable Cholesky factor.
GlsProfile profile_beta_sigma2(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                               std::span<const double> theta, const NuggetPolicy& nugget = {});

struct FitOptions {
  double theta_lo = 1e-3;
  double theta_hi = 10.0;
  int n_starts = 5;
  double start_lo = 1e-2;  ///< multi-starts are log-uniform in [start_lo, start_hi]
  double start_hi = 10.0;
  int budget_per_dim = 200;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  /// If non-empty, replaces the first random start (e.g. the previous fit's theta).
  std::vector<double> warm_start;
  bool standardize = true;
  NuggetPolicy nugget;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
  bool clamped = false;  ///< variance was negative before clamping at 0
};

/// Ordinary Kriging surrogate with a constant trend and a Gaussian kernel.
///
/// Inputs are optionally standardized per dimension (zero mean, unit sample
/// standard deviation of the training set); theta lives in that space.
/// The model is immutable once built and every predict method is const and
/// safe to call concurrently.
class KrigingModel {
 public:
  /// Maximum-likelihood fit. Requires >= 2 rows and no duplicate rows
  /// (1e-12 per coordinate); throws Error(kInvalidArgument) otherwise.
  static KrigingModel fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const FitOptions& options = {});

  /// Model at a fixed theta (no search).
  static KrigingModel with_theta(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 std::span<const double> theta, bool standardize = true,
                                 const NuggetPolicy& nugget = {});

  Prediction predict(std::span<const double> point) const;

  /// Exact mean and variance for rows [begin, end) of `points`.
  /// Returns the number of variances clamped at zero.
  std::size_t predict_batch(const SampleMatrix& points, std::size_t begin, std::size_t end,
                            double* mean, double* variance) const;

  /// Exact mean plus a cheap upper bound on the variance for rows
  /// [begin, end). The bound drops the O(m^2) quadratic form in favor of
  /// ||r||^2 / lambda_max, so it costs O(m) per point.
  void predict_mean_bound(const SampleMatrix& points, std::size_t begin, std::size_t end,
                          double* mean, double* variance_upper) const;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(x_.cols()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  const Eigen::MatrixXd& training_x() const noexcept { return x_raw_; }
  const Eigen::VectorXd& training_y() const noexcept { return y_; }
  const std::vector<double>& theta() const noexcept { return theta_; }
  double beta() const noexcept { return profile_.beta; }
  double sigma2() const noexcept { return profile_.sigma2; }
  double nugget() const noexcept { return profile_.nugget; }
  double psi() const noexcept { return profile_.concentrated_likelihood(); }
  int objective_evaluations() const noexcept { return evaluations_; }
  const GlsProfile& profile() const noexcept { return profile_; }

 private:
  KrigingModel() = default;
  void set_training(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool standardize);
  void standardize_point(std::span<const double> in, double* out) const;
  void correlations(const SampleMatrix& points, std::size_t begin, std::size_t end,
                    Eigen::MatrixXd& r) const;

  Eigen::MatrixXd x_raw_;
  Eigen::MatrixXd x_;  ///< standardized training inputs
  Eigen::VectorXd y_;
  std::vector<double> shift_;
  std::vector<double> scale_;
  std::vector<double> theta_;
  GlsProfile profile_;
  int evaluations_ = 0;
};

/// True if any two rows agree within tol in every coordinate.
bool has_duplicate_rows(const Eigen::MatrixXd& x, double tol = 1e-12);

/// True if `point` matches some row of x within tol in every coordinate.
bool is_duplicate_of(const Eigen::MatrixXd& x, std::span<const double> point, double tol = 1e-12);

}  // namespace akrel

#endif  // AKREL_KRIGING_HPP
