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

#ifndef AKREL_DESIGN_POOL_HPP
#define AKREL_DESIGN_POOL_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "akrel/kriging.hpp"
#include "akrel/learning.hpp"
#include "akrel/random_models.hpp"

namespace akrel {

/// Candidate pool with per-point density and the current surrogate
/// predictions.
///
/// refresh() computes every mean exactly but only an O(m) upper bound on each
/// standard deviation. Exact deviations are computed on demand and cached
/// until the next refresh; both selection rules use the bounds to skip
/// points that cannot win (EFF grows with sd, U shrinks with it).
class DesignPool {
 public:
  DesignPool(const RandomVector& rv, SampleMatrix samples);

  std::size_t size() const noexcept { return samples_.rows(); }
  std::size_t dim() const noexcept { return samples_.cols(); }
  const SampleMatrix& samples() const noexcept { return samples_; }
  const std::vector<double>& density() const noexcept { return density_; }
  /// Indices sorted by (density, index) ascending.
  const std::vector<std::size_t>& density_order() const noexcept { return order_; }

  /// Appends rows and computes their densities. Predictions for the new rows
  /// are stale until refresh_tail() or refresh().
  void append(const SampleMatrix& more);

  /// Recomputes predictions for every point. The pool keeps the model to
  /// back the lazy exact deviations.
  void refresh(std::shared_ptr<const KrigingModel> model);
  /// Computes predictions for rows [begin, size()) with the current model.
  void refresh_tail(std::size_t begin);

  const std::vector<double>& mean() const noexcept { return mean_; }
  const KrigingModel* model() const noexcept { return model_.get(); }
  double sd_upper(std::size_t i) const { return sd_ub_[i]; }
  /// Exact predictive standard deviation (cached).
  double sd(std::size_t i);
  /// Exact deviations for all points.
  std::vector<double> all_sd();
  /// Fills the exact-deviation cache for idx in one batch.
  void compute_exact(std::span<const std::size_t> idx);
  bool pred_fail(std::size_t i) const { return mean_[i] <= 0.0; }
  std::size_t predicted_failures() const noexcept { return n_pred_fail_; }
  double pf_hat() const;
  std::size_t clamped_variances() const noexcept { return clamped_; }

  bool evaluated(std::size_t i) const { return evaluated_[i] != 0; }
  double g_value(std::size_t i) const { return g_[i]; }
  void mark_evaluated(std::size_t i, double g);
  const std::vector<std::uint8_t>& evaluated_flags() const noexcept { return evaluated_; }

  /// Argmax EFF over mask (smallest index on ties); value 0 when every
  /// masked EFF is 0. Throws Error(kDegenerateEsr) on an empty mask.
  Selection select_max_eff(std::span<const std::uint8_t> mask);
  /// Argmin U over mask, same tie rule.
  Selection select_min_u(std::span<const std::uint8_t> mask);

  /// Hash of the sample values; equal pools have equal fingerprints.
  std::uint64_t fingerprint() const;

 private:
  RandomVector rv_;
  SampleMatrix samples_;
  std::vector<double> density_;
  std::vector<std::size_t> order_;
  std::shared_ptr<const KrigingModel> model_;
  std::vector<double> mean_;
  std::vector<double> sd_ub_;
  std::vector<double> sd_exact_;  ///< NaN until computed
  std::size_t n_pred_fail_ = 0;
  std::size_t clamped_ = 0;
  std::vector<std::uint8_t> evaluated_;
  std::vector<double> g_;
};

}  // namespace akrel

#endif  // AKREL_DESIGN_POOL_HPP
