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

#include "akrel/benchmarks.hpp"
#include "akrel/engines.hpp"
#include "akrel/errors.hpp"

namespace akrel {
namespace {

using bench::get;

TEST(SeriesSystem, Examples) {
  EXPECT_DOUBLE_EQ(bench::series_system(0, 0), 3.0);
  const double a = 3.0 / std::sqrt(2.0);
  EXPECT_NEAR(bench::series_system(a, a), 0.0, 1e-14);
  const double x[2] = {0.0, 0.0};
  EXPECT_DOUBLE_EQ(get("series4").g(x), 3.0);
}

TEST(SeriesSystem, Symmetries) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd(0, 2);
  for (int i = 0; i < 100; ++i) {
    const double x1 = nd(gen), x2 = nd(gen);
    const double g = bench::series_system(x1, x2);
    EXPECT_NEAR(bench::series_system(x2, x1), g, 1e-12);
    EXPECT_NEAR(bench::series_system(-x1, -x2), g, 1e-12);
  }
}

TEST(Rastrigin, Examples) {
  EXPECT_DOUBLE_EQ(bench::rastrigin_mod(0, 0), 20.0);
  EXPECT_NEAR(bench::rastrigin_mod(0.5, 0), 9.75, 1e-12);
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 100; ++i) {
    const double x1 = nd(gen), x2 = nd(gen);
    EXPECT_DOUBLE_EQ(bench::rastrigin_mod(-x1, -x2), bench::rastrigin_mod(x1, x2));
    EXPECT_DOUBLE_EQ(bench::rastrigin_mod(-x1, x2), bench::rastrigin_mod(x1, x2));
  }
}

TEST(Oscillator, Examples) {
  const auto& b = get("oscillator6");
  const auto mean = b.rv.mean_point();
  EXPECT_NEAR(b.g(mean), 1.5 - std::abs(2.0 / 1.1 * std::sin(std::sqrt(1.1) / 2.0)), 1e-14);
  EXPECT_NEAR(b.g(mean), 0.58964, 1e-5);
  EXPECT_DOUBLE_EQ(bench::oscillator(1.0, 0.1, 1.0, 0.5, 1.0, 0.0), 1.5);
  EXPECT_DOUBLE_EQ(bench::oscillator(1.0, 0.1, 1.0, 0.7, 0.0, 1.0), 2.1);
  EXPECT_THROW(bench::oscillator(1.0, 0.1, 0.0, 0.5, 1.0, 1.0), Error);
}

// Hand computation at the mean point (N, mm, MPa):
// A = pi/4 (42^2 - 32^2), I = pi/64 (42^4 - 32^4),
// M = 3000 * 120 cos 5deg + 3000 * 60 cos 10deg.
TEST(Tube, MeanPoint) {
  const auto& b = get("tube9");
  const auto mean = b.rv.mean_point();
  ASSERT_EQ(mean.size(), 9u);
  const bench::TubeStress s = bench::tube_stress(5, 42, 3000, 3000, 90000, 120, 60, 27000);
  EXPECT_NEAR(s.area, 581.19, 0.01);
  EXPECT_NEAR(s.moment, 535895.5, 0.5);
  EXPECT_NEAR(s.inertia, 101273.2, 0.1);
  EXPECT_NEAR(s.sigma_x, 158.926, 1e-3);
  EXPECT_NEAR(s.tau_zx, 9.3312, 1e-4);
  EXPECT_NEAR(b.g(mean), 60.2548, 1e-3);
}

TEST(Tube, NoTorqueMeansPureNormalStress) {
  const bench::TubeStress s = bench::tube_stress(5, 42, 3000, 3000, 0, 120, 60, 27000);
  EXPECT_EQ(s.tau_zx, 0.0);
  EXPECT_DOUBLE_EQ(s.sigma_max, std::abs(s.sigma_x));
}

TEST(Tube, DecreasesWithAxialLoad) {
  double prev = INFINITY;
  for (double p = 15000; p <= 40000; p += 1000) {
    const double g = bench::cantilever_tube(5, 42, 3000, 3000, 90000, 220, 120, 60, p);
    EXPECT_LT(g, prev);
    prev = g;
  }
  EXPECT_THROW(bench::cantilever_tube(5, 8, 3000, 3000, 90000, 220, 120, 60, 27000), Error);
}

TEST(Tube, GumbelLoadParameters) {
  const auto& p = get("tube9").rv.marginals().back();
  EXPECT_EQ(p.kind(), MarginalKind::kGumbel);
  EXPECT_NEAR(p.mean(), 27000.0, 1e-8);
  EXPECT_NEAR(p.stddev(), 2700.0, 1e-8);
}

TEST(Registry, NamesAndErrors) {
  EXPECT_EQ(bench::names(), (std::vector<std::string>{"series4", "rastrigin2", "oscillator6", "tube9"}));
  EXPECT_THROW(get("nope"), Error);
  const double x[3] = {0, 0, 0};
  EXPECT_THROW(get("series4").g(x), Error);
  EXPECT_EQ(get("series4").rv.dim(), 2u);
  EXPECT_EQ(get("oscillator6").rv.dim(), 6u);
  EXPECT_EQ(get("tube9").rv.dim(), 9u);
}

// Crude Monte Carlo against the stored references; the tolerance combines
// the reference's own COV with the COV of this run.
TEST(Registry, CrudeMonteCarloMatchesReferences) {
  for (const auto& name : bench::names()) {
    const auto& b = get(name);
    const std::size_t n = 400'000;
    const RunReport r = crude_mcs(b.g, b.rv, n, 17);
    const double own = cov_of_pf(b.reference_pf, n);
    const double tol = 3.0 * b.reference_pf * std::hypot(own, b.reference_cov);
    EXPECT_NEAR(r.pf_hat, b.reference_pf, tol) << name;
    EXPECT_NEAR(cov_of_pf(b.reference_pf, b.reference_n), b.reference_cov, 0.002) << name;
  }
}

}  // namespace
}  // namespace akrel
