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

#ifndef AKREL_LEARNING_HPP
#define AKREL_LEARNING_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace akrel {

/// Returned by u_score when the prediction is certain and off the limit state.
inline constexpr double kUInfinity = std::numeric_limits<double>::max();

/// Expected feasibility of a Gaussian prediction N(mean, sd^2) with respect
/// to the limit state g = 0 and band +/- 2 sd:
///   E[(2 sd - |G|)^+].
/// Evaluated as sd * [M(z-2) - 2 M(z) + M(z+2)] with z = |mean| / sd and
/// M(x) = phi(x) - x Phi(-x), which avoids cancellation in the far tail.
/// Returns 0 when sd == 0.
double eff(double mean, double sd);

/// |mean| / sd; kUInfinity when sd == 0 and mean != 0; 0 when both are 0.
double u_score(double mean, double sd);

/// Phi(-|mean| / sd), in [0, 0.5]. 0 for a certain prediction (sd == 0,
/// mean != 0); 0.5 on the predicted limit state.
double wrong_sign_prob(double mean, double sd);

struct Selection {
  std::size_t index = 0;
  double value = 0.0;
};

/// All per-point scores plus the masked EFF argmax.
struct AcquisitionScores {
  std::vector<double> eff;
  std::vector<double> u;
  std::vector<double> p_wrong;
  std::size_t best_index = 0;
  double best_value = 0.0;
};

/// Argmax of EFF over {i : mask[i] != 0}; EFF outside the mask counts as 0.
/// Ties go to the smallest index. Throws Error(kDegenerateEsr) if the mask
/// selects nothing.
Selection select_next(std::span<const double> eff_values, std::span<const std::uint8_t> mask);

/// Scores every point and selects with select_next.
AcquisitionScores score_pool(std::span<const double> mean, std::span<const double> sd,
                             std::span<const std::uint8_t> mask);

}  // namespace akrel

#endif  // AKREL_LEARNING_HPP
