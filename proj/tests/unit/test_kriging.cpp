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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "akrel/benchmarks.hpp"
#include "akrel/errors.hpp"
#include "akrel/kriging.hpp"

namespace akrel {
namespace {

// Direct-inverse ordinary Kriging in extended precision, used as the
// reference implementation.
struct Naive {
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  long double beta_l, sigma2_l;
  double beta, sigma2;
  Mat x, rinv;
  Vec y, theta;

  Naive(const Eigen::MatrixXd& x_, const Eigen::VectorXd& y_, const std::vector<double>& th,
        double nugget)
      : x(x_.cast<long double>()), y(y_.cast<long double>()) {
    theta = Eigen::Map<const Eigen::VectorXd>(th.data(), static_cast<Eigen::Index>(th.size()))
                .cast<long double>();
    const auto m = x.rows();
    Mat r(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) r(i, j) = corr(x.row(i), x.row(j));
    r.diagonal().array() += static_cast<long double>(nugget);
    rinv = r.inverse();
    const Vec one = Vec::Ones(m);
    beta_l = one.dot(rinv * y) / one.dot(rinv * one);
    const Vec e = y - beta_l * one;
    sigma2_l = e.dot(rinv * e) / m;
    beta = static_cast<double>(beta_l);
    sigma2 = static_cast<double>(sigma2_l);
  }
  long double corr(const Eigen::Matrix<long double, 1, Eigen::Dynamic>& a,
                   const Eigen::Matrix<long double, 1, Eigen::Dynamic>& b) const {
    return std::exp(-(theta.array() * (a - b).transpose().array().square()).sum());
  }
  std::pair<double, double> predict(const Eigen::RowVectorXd& qd) const {
    const Eigen::Matrix<long double, 1, Eigen::Dynamic> q = qd.cast<long double>();
    const auto m = x.rows();
    Vec r(m);
    for (int i = 0; i < m; ++i) r(i) = corr(q, x.row(i));
    const Vec one = Vec::Ones(m);
    const long double mean = beta_l + r.dot(rinv * (y - beta_l * one));
    const long double u = one.dot(rinv * r) - 1.0L;
    const long double var = sigma2_l * (1.0L - r.dot(rinv * r) + u * u / one.dot(rinv * one));
    return {static_cast<double>(mean), static_cast<double>(var)};
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(GaussianCorrelation, Examples) {
  const double a[1] = {0.3}, t1[1] = {1.0};
  EXPECT_EQ(gaussian_correlation(a, a, t1), 1.0);
  const double b[1] = {1.3};
  EXPECT_NEAR(gaussian_correlation(a, b, t1), 0.36787944117144233, 1e-15);
  const double x[2] = {1, 2}, w[2] = {0, 0}, t2[2] = {2, 0.5};
  EXPECT_NEAR(gaussian_correlation(x, w, t2), std::exp(-4.0), 1e-16);
  const double t3[3] = {1, 1, 1};
  EXPECT_THROW(gaussian_correlation(x, w, t3), Error);
}

TEST(Profile, ConstantResponse) {
  Eigen::MatrixXd x(4, 1);
  x << 0, 1, 2, 3;
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(4, 2.5);
  const double th[1] = {1.0};
  const GlsProfile p = profile_beta_sigma2(x, y, th);
  EXPECT_NEAR(p.beta, 2.5, 1e-12);
  EXPECT_NEAR(p.sigma2, 0.0, 1e-20);
}

TEST(Profile, FarApartPoints) {
  Eigen::MatrixXd x(2, 1);
  x << 0, 100;
  Eigen::VectorXd y(2);
  y << 0, 2;
  const double th[1] = {1.0};
  const GlsProfile p = profile_beta_sigma2(x, y, th);
  EXPECT_NEAR(p.beta, 1.0, 1e-12);
  EXPECT_NEAR(p.sigma2, 1.0, 1e-10);
}

TEST(Profile, ThreePointsMatchDirectAlgebra) {
  Eigen::MatrixXd x(3, 1);
  x << 0.0, 0.7, 1.5;
  Eigen::VectorXd y(3);
  y << 1.0, -0.5, 2.0;
  const std::vector<double> th = {1.0};
  const GlsProfile p = profile_beta_sigma2(x, y, th);
  const Naive n(x, y, th, p.nugget);
  EXPECT_LT(rel(p.beta, n.beta), 1e-8);
  EXPECT_LT(std::abs(p.sigma2 - n.sigma2) / n.sigma2, 1e-8);
}

TEST(Profile, IllConditionedRaisesNugget) {
  Eigen::MatrixXd x(3, 1);
  x << 0.0, 1e-7, 2e-7;
  Eigen::VectorXd y(3);
  y << 0.0, 0.1, 1.0;
  const double th[1] = {1e-3};
  NuggetPolicy tiny;
  tiny.start_per_point = 1e-22;
  // The correlation matrix rounds to all ones, so the first attempts fail.
  const GlsProfile p = profile_beta_sigma2(x, y, th, tiny);
  EXPECT_GT(p.nugget, 3e-22);
  EXPECT_LE(p.nugget, 1e-6);
  EXPECT_TRUE(std::isfinite(p.beta));
  NuggetPolicy bad;
  bad.start_per_point = 0.0;
  EXPECT_THROW(profile_beta_sigma2(x, y, th, bad), Error);
}

TEST(Predict, MatchesDirectInverseOnRandomProblems) {
  // Thetas stay well away from zero so the correlation matrices are
  // well conditioned; a double Cholesky cannot promise 1e-8 otherwise.
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::uniform_real_distribution<double> lt(std::log(0.3), std::log(5.0));
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 3;
    Eigen::MatrixXd x(5, d);
    Eigen::VectorXd y(5);
    for (int i = 0; i < 5; ++i) {
      for (int k = 0; k < d; ++k) x(i, k) = unif(gen);
      y(i) = unif(gen) * 3.0;
    }
    std::vector<double> th(d);
    for (auto& t : th) t = std::exp(lt(gen));
    const KrigingModel m = KrigingModel::with_theta(x, y, th, /*standardize=*/false);
    const Naive n(x, y, th, m.nugget());
    ASSERT_LT(rel(m.beta(), n.beta), 1e-8) << trial;
    ASSERT_LT(std::abs(m.sigma2() - n.sigma2) / n.sigma2, 1e-8) << trial;
    for (int q = 0; q < 5; ++q) {
      std::vector<double> pt(d);
      for (auto& v : pt) v = unif(gen);
      const Prediction p = m.predict(pt);
      const auto [mean, var] =
          n.predict(Eigen::Map<const Eigen::RowVectorXd>(pt.data(), d));
      EXPECT_LT(rel(p.mean, mean), 1e-8) << trial;
      EXPECT_LT(std::abs(p.variance - std::max(0.0, var)) / n.sigma2, 1e-8) << trial;
    }
  }
}

TEST(Predict, MidpointOfThreePointModel) {
  Eigen::MatrixXd x(3, 1);
  x << 0.0, 1.0, 2.0;
  Eigen::VectorXd y(3);
  y << 0.0, 1.0, 0.5;
  const std::vector<double> th = {0.8};
  const KrigingModel m = KrigingModel::with_theta(x, y, th, false);
  const Naive n(x, y, th, m.nugget());
  const double q[1] = {0.5};
  const auto [mean, var] = n.predict(Eigen::RowVectorXd::Constant(1, 0.5));
  const Prediction p = m.predict(q);
  EXPECT_LT(rel(p.mean, mean), 1e-8);
  EXPECT_LT(std::abs(p.variance - var) / m.sigma2(), 1e-8);
}

TEST(Predict, FarFieldLimit) {
  Eigen::MatrixXd x(3, 1);
  x << 0.0, 1.0, 2.0;
  Eigen::VectorXd y(3);
  y << 0.0, 1.0, 0.5;
  const std::vector<double> th = {1.0};
  const KrigingModel m = KrigingModel::with_theta(x, y, th, false);
  const double q[1] = {50.0};
  const Prediction p = m.predict(q);
  const double ones_quad = m.profile().ones_quad;
  EXPECT_NEAR(p.mean, m.beta(), 1e-12);
  EXPECT_NEAR(p.variance, m.sigma2() * (1.0 + 1.0 / ones_quad), 1e-12 * m.sigma2());
}

KrigingModel fit_series(std::size_t n, std::uint64_t seed, Eigen::MatrixXd& x, Eigen::VectorXd& y) {
  const auto& b = bench::get("series4");
  const SampleMatrix s = lhs_sample(b.rv, n, seed);
  x.resize(static_cast<Eigen::Index>(n), 2);
  y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    x(static_cast<Eigen::Index>(i), 0) = s(i, 0);
    x(static_cast<Eigen::Index>(i), 1) = s(i, 1);
    y(static_cast<Eigen::Index>(i)) = b.g(s.row(i));
  }
  FitOptions o;
  o.seed = seed;
  return KrigingModel::fit(x, y, o);
}

TEST(Predict, InterpolatesTrainingPoints) {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  const KrigingModel m = fit_series(30, 3, x, y);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const std::vector<double> pt = {x(i, 0), x(i, 1)};
    const Prediction p = m.predict(pt);
    EXPECT_LE(std::abs(p.mean - y(i)), 1e-6 * (1 + std::abs(y(i))));
    EXPECT_LE(p.variance, 10 * m.nugget() * m.sigma2());
    EXPECT_GE(p.variance, 0.0);
  }
}

TEST(Predict, BatchPartitionIndependent) {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  const KrigingModel m = fit_series(25, 8, x, y);
  const SampleMatrix q = plain_sample(bench::get("series4").rv, 1000, 5);
  std::vector<double> m1(1000), v1(1000), m2(1000), v2(1000), mb(1000), vb(1000);
  m.predict_batch(q, 0, 1000, m1.data(), v1.data());
  for (auto [b, e] : {std::pair<std::size_t, std::size_t>{0, 7}, {7, 300}, {300, 301}, {301, 1000}}) {
    m.predict_batch(q, b, e, m2.data() + b, v2.data() + b);
  }
  EXPECT_EQ(m1, m2);
  EXPECT_EQ(v1, v2);
  m.predict_mean_bound(q, 0, 1000, mb.data(), vb.data());
  EXPECT_EQ(m1, mb);
  for (std::size_t i = 0; i < 1000; ++i) EXPECT_GE(vb[i], v1[i]);
}

TEST(Fit, BeatsLogGridOnOneDimensionalProblem) {
  Eigen::MatrixXd x(8, 1);
  Eigen::VectorXd y(8);
  for (int i = 0; i < 8; ++i) {
    x(i, 0) = -1.0 + 0.3 * i;
    y(i) = std::sin(2.0 * x(i, 0)) + 0.5 * x(i, 0);
  }
  const KrigingModel m = KrigingModel::fit(x, y);
  double grid_best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 50; ++k) {
    const double t = std::exp(std::log(1e-3) + (std::log(10.0) - std::log(1e-3)) * k / 49.0);
    const std::vector<double> th = {t};
    grid_best = std::min(grid_best, KrigingModel::with_theta(x, y, th).psi());
  }
  EXPECT_LE(m.psi(), grid_best * (1 + 1e-9) + 1e-12);
  EXPECT_GE(m.theta()[0], 1e-3);
  EXPECT_LE(m.theta()[0], 10.0);
}

TEST(Fit, SymmetricDataGivesMirroredObjective) {
  std::vector<std::pair<double, double>> pts = {{0.1, 0.9}, {0.4, -0.3}, {1.2, 0.2}, {-0.7, 0.5}, {0.0, 0.0}, {1.0, 1.0}};
  Eigen::MatrixXd x(10, 2);
  Eigen::VectorXd y(10);
  int r = 0;
  for (auto [a, b] : pts) {
    const double v = std::cos(a) + std::cos(b) + a * b;
    x(r, 0) = a;
    x(r, 1) = b;
    y(r++) = v;
    if (a != b) {
      x(r, 0) = b;
      x(r, 1) = a;
      y(r++) = v;
    }
  }
  x.conservativeResize(r, 2);
  y.conservativeResize(r);
  const KrigingModel m = KrigingModel::fit(x, y);
  const std::vector<double> mirrored = {m.theta()[1], m.theta()[0]};
  const double psi_m = KrigingModel::with_theta(x, y, mirrored).psi();
  EXPECT_NEAR(psi_m, m.psi(), 1e-10 * m.psi());
}

TEST(Fit, NoiseLikeResponseStaysInBounds) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd x(20, 2);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = nd(gen);
    x(i, 1) = nd(gen);
    y(i) = nd(gen);
  }
  const KrigingModel m = KrigingModel::fit(x, y);
  for (double t : m.theta()) {
    EXPECT_GE(t, 1e-3);
    EXPECT_LE(t, 10.0);
  }
}

TEST(Fit, ObjectiveNoWorseThanEveryStart) {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  const KrigingModel m = fit_series(20, 4, x, y);
  // Any theta, including the warm start, must not beat the returned value
  // when it was one of the starts.
  FitOptions o;
  o.seed = 4;
  o.warm_start = {0.7, 2.0};
  const KrigingModel w = KrigingModel::fit(x, y, o);
  EXPECT_LE(w.psi(), KrigingModel::with_theta(x, y, o.warm_start).psi());
  EXPECT_GT(m.objective_evaluations(), 1);
}

TEST(Fit, Deterministic) {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  const KrigingModel a = fit_series(20, 9, x, y);
  const KrigingModel b = fit_series(20, 9, x, y);
  EXPECT_EQ(a.theta(), b.theta());
  EXPECT_EQ(a.beta(), b.beta());
  EXPECT_EQ(a.sigma2(), b.sigma2());
}

TEST(Fit, RejectsBadTrainingSets) {
  Eigen::MatrixXd x(1, 1);
  x << 0.0;
  Eigen::VectorXd y(1);
  y << 1.0;
  EXPECT_THROW(KrigingModel::fit(x, y), Error);
  Eigen::MatrixXd xd(3, 1);
  xd << 0.0, 1.0, 0.0;
  Eigen::VectorXd yd(3);
  yd << 1, 2, 1;
  try {
    KrigingModel::fit(xd, yd);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  EXPECT_TRUE(has_duplicate_rows(xd));
  const double p[1] = {1.0 + 1e-13};
  EXPECT_TRUE(is_duplicate_of(xd, p));
  const double q[1] = {1.0 + 1e-9};
  EXPECT_FALSE(is_duplicate_of(xd, q));
}

}  // namespace
}  // namespace akrel
