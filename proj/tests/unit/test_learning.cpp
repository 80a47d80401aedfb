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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "akrel/errors.hpp"
#include "akrel/learning.hpp"

namespace akrel {
namespace {

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
double cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Textbook closed form with band half-width 2 sd around the zero level.
double eff_expanded(double mu, double sd) {
  const double e = 2.0 * sd;
  const double zl = (-e - mu) / sd, zu = (e - mu) / sd, z0 = -mu / sd;
  return mu * (2.0 * cdf(z0) - cdf(zl) - cdf(zu)) - sd * (2.0 * phi(z0) - phi(zl) - phi(zu)) +
         e * (cdf(zu) - cdf(zl));
}

TEST(Eff, ClosedFormExamples) {
  EXPECT_NEAR(eff(0.0, 1.0), 1.2190962, 1e-6);
  EXPECT_NEAR(eff(0.0, 1.0), eff_expanded(0.0, 1.0), 1e-12);
  for (double mu : {-3.0, -1.2, -0.1, 0.4, 1.7, 2.5, 5.0}) {
    for (double sd : {0.1, 0.7, 1.0, 3.0}) {
      EXPECT_NEAR(eff(mu, sd), eff_expanded(mu, sd), 1e-10 * (1 + sd)) << mu << " " << sd;
    }
  }
}

TEST(Eff, MatchesMonteCarlo) {
  std::mt19937_64 gen(2024);
  const std::vector<std::pair<double, double>> cases = {
      {0.0, 1.0}, {0.5, 0.3}, {-1.0, 2.0}, {2.0, 1.0}, {0.05, 0.01}};
  for (auto [mu, sd] : cases) {
    std::normal_distribution<double> nd(mu, sd);
    const int n = 1'000'000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = std::max(0.0, 2.0 * sd - std::abs(nd(gen)));
      s += v;
      s2 += v * v;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_LE(std::abs(eff(mu, sd) - mean), 3.0 * se) << mu << " " << sd;
  }
}

TEST(Eff, EvenMonotoneAndScaleInvariant) {
  for (double mu : {0.0, 0.3, 1.0, 4.0}) {
    EXPECT_EQ(eff(mu, 0.8), eff(-mu, 0.8));
    double prev = 0.0;
    for (double sd = 0.05; sd < 10.0; sd *= 1.3) {
      const double v = eff(mu, sd);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
  double prev = eff(0.0, 1.0);
  for (double mu = 0.1; mu < 8.0; mu += 0.1) {
    const double v = eff(mu, 1.0);
    EXPECT_LE(v, prev + 1e-15);
    prev = v;
  }
  for (double c : {1e-3, 0.5, 7.0, 1e4}) {
    EXPECT_NEAR(eff(c * 0.6, c * 0.9), c * eff(0.6, 0.9), 1e-12 * c);
  }
}

TEST(Eff, DegenerateAndFarTail) {
  EXPECT_EQ(eff(1.0, 0.0), 0.0);
  EXPECT_EQ(eff(0.0, 0.0), 0.0);
  const double far = eff(1.0, 1e-3);
  EXPECT_GE(far, 0.0);
  EXPECT_LT(far, 1e-100);
  EXPECT_TRUE(std::isfinite(eff(1e300, 1.0)));
}

TEST(UScore, Examples) {
  EXPECT_DOUBLE_EQ(u_score(1.0, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(u_score(-3.0, 1.5), 2.0);
  EXPECT_EQ(u_score(0.0, 0.0), 0.0);
  EXPECT_EQ(u_score(1.0, 0.0), kUInfinity);
}

TEST(WrongSignProb, Examples) {
  EXPECT_NEAR(wrong_sign_prob(1.0, 1.0), 0.15865525393145707, 1e-14);
  EXPECT_NEAR(wrong_sign_prob(-2.0, 1.0), 0.022750131948179209, 1e-14);
  EXPECT_DOUBLE_EQ(wrong_sign_prob(0.0, 2.0), 0.5);
  EXPECT_EQ(wrong_sign_prob(0.0, 0.0), 0.5);
  EXPECT_EQ(wrong_sign_prob(1.0, 0.0), 0.0);
  for (double mu : {-2.0, 0.3, 1.5}) {
    EXPECT_NEAR(wrong_sign_prob(mu, 0.7), cdf(-u_score(mu, 0.7)), 1e-15);
  }
}

TEST(SelectNext, TieBreakAndMask) {
  const std::vector<double> v = {0.1, 0.5, 0.5, 0.9};
  std::vector<std::uint8_t> all(4, 1);
  EXPECT_EQ(select_next(v, all).index, 3u);
  std::vector<std::uint8_t> m = {1, 1, 1, 0};
  const Selection s = select_next(v, m);
  EXPECT_EQ(s.index, 1u);
  EXPECT_EQ(s.value, 0.5);
  const std::vector<double> zeros(4, 0.0);
  m = {0, 0, 1, 1};
  EXPECT_EQ(select_next(zeros, m).index, 2u);
}

TEST(SelectNext, Errors) {
  const std::vector<double> v = {1.0, 2.0};
  const std::vector<std::uint8_t> none(2, 0);
  try {
    select_next(v, none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateEsr);
  }
  const std::vector<std::uint8_t> short_mask(1, 1);
  EXPECT_THROW(select_next(v, short_mask), Error);
}

TEST(ScorePool, ConsistentWithPointwise) {
  const std::vector<double> mean = {0.5, -0.1, 2.0, 0.0};
  const std::vector<double> sd = {1.0, 0.2, 0.1, 0.0};
  const std::vector<std::uint8_t> mask = {1, 1, 1, 1};
  const AcquisitionScores s = score_pool(mean, sd, mask);
  for (std::size_t i = 0; i < mean.size(); ++i) {
    EXPECT_EQ(s.eff[i], eff(mean[i], sd[i]));
    EXPECT_EQ(s.u[i], u_score(mean[i], sd[i]));
    EXPECT_EQ(s.p_wrong[i], wrong_sign_prob(mean[i], sd[i]));
  }
  EXPECT_EQ(s.best_index, 0u);
}

}  // namespace
}  // namespace akrel
