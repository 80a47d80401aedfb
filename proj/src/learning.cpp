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

#include "akrel/learning.hpp"

#include <algorithm>
#include <cmath>

#include "akrel/errors.hpp"
#include "akrel/normal.hpp"

namespace akrel {

namespace {

// E[(W - x)^+] for W ~ N(0, 1).
double ramp_expectation(double x) {
  return normal::pdf(x) - x * normal::cdf(-x);
}

}  // namespace

double eff(double mean, double sd) {
  if (!(sd > 0.0)) return 0.0;
  const double z = std::abs(mean) / sd;
  // (2 - |t|)^+ = (t + 2)^+ - 2 t^+ + (t - 2)^+ in expectation over t ~ N(z, 1).
  const double h = ramp_expectation(z - 2.0) - 2.0 * ramp_expectation(z) + ramp_expectation(z + 2.0);
  return std::max(0.0, sd * h);
}

double u_score(double mean, double sd) {
  if (sd > 0.0) return std::abs(mean) / sd;
  return mean == 0.0 ? 0.0 : kUInfinity;
}

double wrong_sign_prob(double mean, double sd) {
  if (sd > 0.0) return normal::cdf(-std::abs(mean) / sd);
  return mean == 0.0 ? 0.5 : 0.0;
}

Selection select_next(std::span<const double> eff_values, std::span<const std::uint8_t> mask) {
  if (eff_values.size() != mask.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "select_next: score/mask size mismatch");
  }
  bool found = false;
  Selection best;
  for (std::size_t i = 0; i < eff_values.size(); ++i) {
    if (!mask[i]) continue;
    if (!found || eff_values[i] > best.value) {
      best = {i, eff_values[i]};
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kDegenerateEsr, "select_next: the effective sampling region is empty");
  }
  return best;
}

AcquisitionScores score_pool(std::span<const double> mean, std::span<const double> sd,
                             std::span<const std::uint8_t> mask) {
  if (mean.size() != sd.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "score_pool: mean/sd size mismatch");
  }
  AcquisitionScores s;
  s.eff.resize(mean.size());
  s.u.resize(mean.size());
  s.p_wrong.resize(mean.size());
  for (std::size_t i = 0; i < mean.size(); ++i) {
    s.eff[i] = eff(mean[i], sd[i]);
    s.u[i] = u_score(mean[i], sd[i]);
    s.p_wrong[i] = wrong_sign_prob(mean[i], sd[i]);
  }
  const Selection best = select_next(s.eff, mask);
  s.best_index = best.index;
  s.best_value = best.value;
  return s;
}

}  // namespace akrel
