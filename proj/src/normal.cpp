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

#include "akrel/normal.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>

namespace akrel::normal {

double pdf(double z) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double cdf(double z) noexcept { return 0.5 * std::erfc(-z * kInvSqrt2); }

double quantile(double u) {
  static const boost::math::normal_distribution<double> standard(0.0, 1.0);
  return boost::math::quantile(standard, u);
}

}  // namespace akrel::normal
