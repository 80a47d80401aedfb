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

#include "akrel/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "akrel/errors.hpp"

namespace akrel::bench {

double series_system(double x1, double x2) {
  const double s = (x1 + x2) / std::numbers::sqrt2;
  const double d = x1 - x2;
  const double b1 = 3.0 + 0.1 * d * d - s;
  const double b2 = 3.0 + 0.1 * d * d + s;
  const double b3 = d + 6.0 / std::numbers::sqrt2;
  const double b4 = -d + 6.0 / std::numbers::sqrt2;
  return std::min({b1, b2, b3, b4});
}

double rastrigin_mod(double x1, double x2) {
  auto term = [](double x) { return x * x - 5.0 * std::cos(2.0 * std::numbers::pi * x); };
  return 10.0 - (term(x1) + term(x2));
}

double oscillator(double c1, double c2, double m, double r, double t1, double f1) {
  if (!(m > 0.0) || !(c1 + c2 > 0.0)) {
    throw Error(ErrorCode::kDomain, "oscillator needs m > 0 and c1 + c2 > 0");
  }
  const double w0 = std::sqrt((c1 + c2) / m);
  return 3.0 * r - std::abs(2.0 * f1 / (m * w0 * w0) * std::sin(w0 * t1 / 2.0));
}

TubeStress tube_stress(double t, double d, double f1, double f2, double torque, double l1,
                       double l2, double p) {
  if (!(t > 0.0) || !(d > 2.0 * t)) {
    throw Error(ErrorCode::kDomain, "tube needs d > 2 t > 0");
  }
  constexpr double kTheta1 = 5.0 * std::numbers::pi / 180.0;
  constexpr double kTheta2 = 10.0 * std::numbers::pi / 180.0;
  const double inner = d - 2.0 * t;
  TubeStress s;
  s.moment = f1 * l1 * std::cos(kTheta1) + f2 * l2 * std::cos(kTheta2);
  s.area = std::numbers::pi / 4.0 * (d * d - inner * inner);
  const double c = d / 2.0;
  s.inertia = std::numbers::pi / 64.0 * (std::pow(d, 4) - std::pow(inner, 4));
  const double polar = 2.0 * s.inertia;
  s.tau_zx = torque * d / (2.0 * polar);
  s.sigma_x = (p + f1 * std::sin(kTheta1) + f2 * std::sin(kTheta2)) / s.area + s.moment * c / s.inertia;
  s.sigma_max = std::sqrt(s.sigma_x * s.sigma_x + 3.0 * s.tau_zx * s.tau_zx);
  return s;
}

double cantilever_tube(double t, double d, double f1, double f2, double torque, double sigma_cap,
                       double l1, double l2, double p) {
  return sigma_cap - tube_stress(t, d, f1, f2, torque, l1, l2, p).sigma_max;
}

namespace {

void check_dim(std::span<const double> x, std::size_t n) {
  if (x.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "benchmark expects " + std::to_string(n) + " inputs, got " + std::to_string(x.size()));
  }
}

std::vector<Benchmark> make_registry() {
  std::vector<Benchmark> r;
  r.push_back({"series4",
               "four-branch series system, 2 standard normals",
               RandomVector({Marginal::normal(0, 1), Marginal::normal(0, 1)}, {"x1", "x2"}),
               [](std::span<const double> x) {
                 check_dim(x, 2);
                 return series_system(x[0], x[1]);
               },
               4.498e-3, 0.015, 1'000'000, 910, "table2"});
  r.push_back({"rastrigin2",
               "modified Rastrigin function, 2 standard normals",
               RandomVector({Marginal::normal(0, 1), Marginal::normal(0, 1)}, {"x1", "x2"}),
               [](std::span<const double> x) {
                 check_dim(x, 2);
                 return rastrigin_mod(x[0], x[1]);
               },
               7.308e-2, 0.015, 60'000, 5104, "table4"});
  r.push_back({"oscillator6",
               "undamped nonlinear oscillator, 6 normals",
               RandomVector({Marginal::normal(1.0, 0.1), Marginal::normal(0.1, 0.01),
                             Marginal::normal(1.0, 0.05), Marginal::normal(0.5, 0.05),
                             Marginal::normal(1.0, 0.2), Marginal::normal(1.0, 0.2)},
                            {"c1", "c2", "m", "r", "t1", "F1"}),
               [](std::span<const double> x) {
                 check_dim(x, 6);
                 return oscillator(x[0], x[1], x[2], x[3], x[4], x[5]);
               },
               2.847e-2, 0.022, 70'000, 606, "table7"});
  // Units: mm, N, N mm, MPa.
  r.push_back({"tube9",
               "cantilever tube, 9 variables (normal, uniform, Gumbel); units N, mm, MPa",
               RandomVector({Marginal::normal(5.0, 0.1), Marginal::normal(42.0, 0.5),
                             Marginal::normal(3000.0, 300.0), Marginal::normal(3000.0, 300.0),
                             Marginal::normal(90000.0, 9000.0), Marginal::normal(220.0, 22.0),
                             Marginal::uniform(119.75, 120.25), Marginal::uniform(59.75, 60.25),
                             Marginal::gumbel(27000.0, 2700.0)},
                            {"t", "d", "F1", "F2", "T", "sigma_cap", "L1", "L2", "P"}),
               [](std::span<const double> x) {
                 check_dim(x, 9);
                 return cantilever_tube(x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7], x[8]);
               },
               6.850e-3, 0.049, 60'000, 831, "table10"});
  return r;
}

const std::vector<Benchmark>& registry() {
  static const std::vector<Benchmark> r = make_registry();
  return r;
}

}  // namespace

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& b : registry()) out.push_back(b.name);
  return out;
}

const Benchmark& get(const std::string& name) {
  for (const auto& b : registry()) {
    if (b.name == name) return b;
  }
  throw Error(ErrorCode::kConfig, "unknown benchmark '" + name + "'");
}

}  // namespace akrel::bench
