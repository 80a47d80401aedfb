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

#include "akrel/design_pool.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "akrel/error_bound.hpp"
#include "akrel/errors.hpp"

namespace akrel {

namespace {

constexpr std::size_t kChunk = 64;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

DesignPool::DesignPool(const RandomVector& rv, SampleMatrix samples)
    : rv_(rv), samples_(std::move(samples)) {
  if (samples_.cols() != rv_.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "pool columns must match the random vector");
  }
  density_.resize(samples_.rows());
  for (std::size_t i = 0; i < samples_.rows(); ++i) density_[i] = rv_.joint_pdf(samples_.row(i));
  order_ = akrel::density_order(density_);
  evaluated_.assign(size(), 0);
  g_.assign(size(), kNaN);
  mean_.assign(size(), kNaN);
  sd_ub_.assign(size(), kNaN);
  sd_exact_.assign(size(), kNaN);
}

void DesignPool::append(const SampleMatrix& more) {
  const std::size_t old = size();
  samples_.append(more);
  density_.resize(size());
  for (std::size_t i = old; i < size(); ++i) density_[i] = rv_.joint_pdf(samples_.row(i));
  order_ = akrel::density_order(density_);
  evaluated_.resize(size(), 0);
  g_.resize(size(), kNaN);
  mean_.resize(size(), kNaN);
  sd_ub_.resize(size(), kNaN);
  sd_exact_.resize(size(), kNaN);
}

void DesignPool::refresh(std::shared_ptr<const KrigingModel> model) {
  model_ = std::move(model);
  n_pred_fail_ = 0;
  clamped_ = 0;
  std::fill(sd_exact_.begin(), sd_exact_.end(), kNaN);
  refresh_tail(0);
}

void DesignPool::refresh_tail(std::size_t begin) {
  if (!model_) throw Error(ErrorCode::kInvalidArgument, "pool has no model to refresh from");
  const std::size_t n = size();
  if (begin >= n) return;
  model_->predict_mean_bound(samples_, begin, n, mean_.data() + begin, sd_ub_.data() + begin);
  for (std::size_t i = begin; i < n; ++i) {
    sd_ub_[i] = std::sqrt(sd_ub_[i]);
    sd_exact_[i] = kNaN;
    if (mean_[i] <= 0.0) ++n_pred_fail_;
  }
}

void DesignPool::compute_exact(std::span<const std::size_t> idx) {
  std::vector<std::size_t> todo;
  for (std::size_t i : idx) {
    if (std::isnan(sd_exact_[i])) todo.push_back(i);
  }
  if (todo.empty()) return;
  SampleMatrix rows(todo.size(), dim());
  for (std::size_t k = 0; k < todo.size(); ++k) {
    const auto src = samples_.row(todo[k]);
    std::copy(src.begin(), src.end(), rows.row(k).begin());
  }
  std::vector<double> m(todo.size());
  std::vector<double> v(todo.size());
  clamped_ += model_->predict_batch(rows, 0, todo.size(), m.data(), v.data());
  for (std::size_t k = 0; k < todo.size(); ++k) {
    // The bound can only be looser than the exact value; guard rounding.
    sd_exact_[todo[k]] = std::min(std::sqrt(v[k]), sd_ub_[todo[k]]);
  }
}

double DesignPool::sd(std::size_t i) {
  const std::size_t one[1] = {i};
  compute_exact(one);
  return sd_exact_[i];
}

std::vector<double> DesignPool::all_sd() {
  std::vector<std::size_t> idx(size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  compute_exact(idx);
  return sd_exact_;
}

double DesignPool::pf_hat() const {
  if (size() == 0) return 0.0;
  return static_cast<double>(n_pred_fail_) / static_cast<double>(size());
}

void DesignPool::mark_evaluated(std::size_t i, double g) {
  evaluated_[i] = 1;
  g_[i] = g;
}

Selection DesignPool::select_max_eff(std::span<const std::uint8_t> mask) {
  if (mask.size() != size()) {
    throw Error(ErrorCode::kDimensionMismatch, "select: mask size mismatch");
  }
  std::vector<std::size_t> cand;
  std::vector<double> ub(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    if (!mask[i]) continue;
    cand.push_back(i);
    ub[i] = eff(mean_[i], sd_ub_[i]);
  }
  if (cand.empty()) {
    throw Error(ErrorCode::kDegenerateEsr, "select: the effective sampling region is empty");
  }
  std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
    return ub[a] > ub[b] || (ub[a] == ub[b] && a < b);
  });

  bool found = false;
  Selection best;
  std::size_t pos = 0;
  while (pos < cand.size()) {
    const std::size_t head = cand[pos];
    if (found && ub[head] < best.value) break;
    if (ub[head] == 0.0) {
      // Every remaining exact EFF is 0 as well.
      const std::size_t lowest = *std::min_element(cand.begin() + static_cast<std::ptrdiff_t>(pos), cand.end());
      if (!found || best.value == 0.0) {
        best = {found ? std::min(best.index, lowest) : lowest, 0.0};
        found = true;
      }
      break;
    }
    const std::size_t stop = std::min(cand.size(), pos + kChunk);
    const std::span<const std::size_t> chunk(cand.data() + pos, stop - pos);
    compute_exact(chunk);
    for (std::size_t i : chunk) {
      const double v = eff(mean_[i], sd_exact_[i]);
      if (!found || v > best.value || (v == best.value && i < best.index)) {
        best = {i, v};
        found = true;
      }
    }
    pos = stop;
  }
  return best;
}

Selection DesignPool::select_min_u(std::span<const std::uint8_t> mask) {
  if (mask.size() != size()) {
    throw Error(ErrorCode::kDimensionMismatch, "select: mask size mismatch");
  }
  std::vector<std::size_t> cand;
  std::vector<double> lb(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    if (!mask[i]) continue;
    cand.push_back(i);
    lb[i] = u_score(mean_[i], sd_ub_[i]);
  }
  if (cand.empty()) {
    throw Error(ErrorCode::kDegenerateEsr, "select: the effective sampling region is empty");
  }
  std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
    return lb[a] < lb[b] || (lb[a] == lb[b] && a < b);
  });

  bool found = false;
  Selection best;
  std::size_t pos = 0;
  while (pos < cand.size()) {
    if (found && lb[cand[pos]] > best.value) break;
    const std::size_t stop = std::min(cand.size(), pos + kChunk);
    const std::span<const std::size_t> chunk(cand.data() + pos, stop - pos);
    compute_exact(chunk);
    for (std::size_t i : chunk) {
      const double v = u_score(mean_[i], sd_exact_[i]);
      if (!found || v < best.value || (v == best.value && i < best.index)) {
        best = {i, v};
        found = true;
      }
    }
    pos = stop;
  }
  return best;
}

std::uint64_t DesignPool::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFFu;
      h *= 0x100000001b3ULL;
    }
  };
  mix(samples_.rows());
  mix(samples_.cols());
  for (double x : samples_.values()) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    mix(bits);
  }
  return h;
}

}  // namespace akrel
