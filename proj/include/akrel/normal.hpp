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

#ifndef AKREL_NORMAL_HPP
#define AKREL_NORMAL_HPP

namespace akrel::normal {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Standard normal density.
double pdf(double z) noexcept;

/// Standard normal CDF, accurate in both tails.
double cdf(double z) noexcept;

/// Standard normal quantile; u must lie in (0, 1).
double quantile(double u);

}  // namespace akrel::normal

#endif  // AKREL_NORMAL_HPP
