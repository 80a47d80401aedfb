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

#ifndef AKREL_RNG_HPP
#define AKREL_RNG_HPP

#include <cstdint>
#include <random>

namespace akrel {

/// Named substreams. Every consumer of randomness in a run draws from its
/// own substream so that, for example, growing the candidate pool never
/// shifts the draws used for the initial training subset.
namespace stream {
inline constexpr std::uint64_t kInitialPool = 1;
inline constexpr std::uint64_t kInitialTraining = 2;
inline constexpr std::uint64_t kCrudeMcs = 3;
/// Pool growth number k (0-based) uses kPoolGrowth + k.
inline constexpr std::uint64_t kPoolGrowth = 1'000;
/// Hyper-parameter multi-starts for a fit on m training points use kMleStarts + m.
inline constexpr std::uint64_t kMleStarts = 1'000'000;
/// Monte Carlo Poisson-binomial quantiles, offset by the learning iteration.
inline constexpr std::uint64_t kQuantileMc = 2'000'000;
}  // namespace stream

/// SplitMix64 finalizer; used to derive substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seedable, splittable 64-bit generator.
///
/// A substream is a std::mt19937_64 seeded with
///   splitmix64(splitmix64(seed) ^ splitmix64(stream + 0xD1B54A32D192ED03)).
/// Doubles are produced from the top 53 bits, so sequences are identical on
/// every conforming standard library (unlike std::uniform_real_distribution).
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream_id)
      : engine_(derive(seed, stream_id)) {}

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream_id) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream_id + 0xD1B54A32D192ED03ULL));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n) by rejection; n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace akrel

#endif  // AKREL_RNG_HPP
