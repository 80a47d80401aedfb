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

#ifndef AKREL_BENCHMARKS_HPP
#define AKREL_BENCHMARKS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "akrel/engines.hpp"
#include "akrel/random_models.hpp"

namespace akrel::bench {

/// Four-branch series system in two standard normal variables.
double series_system(double x1, double x2);

/// 10 - sum_i (x_i^2 - 5 cos(2 pi x_i)).
double rastrigin_mod(double x1, double x2);

/// Undamped oscillator: 3 r - |2 F1 / (m w0^2) sin(w0 t1 / 2)|, w0 = sqrt((c1 + c2) / m).
/// Throws Error(kDomain) unless m > 0 and c1 + c2 > 0.
double oscillator(double c1, double c2, double m, double r, double t1, double f1);

/// Stress terms of the tube, units N, mm, MPa.
struct TubeStress {
  double area = 0.0;
  double moment = 0.0;
  double inertia = 0.0;
  double sigma_x = 0.0;
  double tau_zx = 0.0;
  double sigma_max = 0.0;
};

/// Cantilever tube under two inclined tip loads, torque and axial load:
/// sigma_cap - sqrt(sigma_x^2 + 3 tau_zx^2). Lengths in mm, forces in N,
/// torque in N mm, stresses in MPa. Throws Error(kDomain) unless d > 2 t > 0.
double cantilever_tube(double t, double d, double f1, double f2, double torque, double sigma_cap,
                       double l1, double l2, double p);
TubeStress tube_stress(double t, double d, double f1, double f2, double torque, double l1,
                       double l2, double p);

/// A registered benchmark: random model, limit state and reference numbers.
struct Benchmark {
  std::string name;
  std::string description;
  RandomVector rv;
  LimitState g;
  double reference_pf = 0.0;
  double reference_cov = 0.0;
  std::size_t reference_n = 0;  ///< Monte Carlo sample count behind reference_pf
  std::size_t default_max_calls = 2000;
  /// Preset used for single comparison runs ("table2", ...).
  std::string preset;
};

/// Names in registration order: series4, rastrigin2, oscillator6, tube9.
std::vector<std::string> names();

/// Throws Error(kConfig) for an unknown name.
const Benchmark& get(const std::string& name);

}  // namespace akrel::bench

#endif  // AKREL_BENCHMARKS_HPP
