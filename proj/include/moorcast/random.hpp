// Copyright 2026 The Moorcast Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Counter-based pseudo random numbers.
//
// Every draw is a pure function of (key, counter): the 64-bit output is the
// SplitMix64 finalizer applied to key + counter * 0x9E3779B97F4A7C15. The
// stream is therefore identical on every platform and compiler, and any
// draw can be recomputed without replaying the stream. Distributions are
// implemented here rather than through <random> because the standard
// distributions are not specified bit-for-bit.

#include <cmath>
#include <cstdint>

#include "moorcast/common.hpp"

namespace moorcast {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives an independent stream key from a master seed and an index.
inline constexpr std::uint64_t derive_seed(std::uint64_t master,
                                           std::uint64_t index) {
  return splitmix64_mix(splitmix64_mix(master ^ 0x6A09E667F3BCC908ULL) +
                        (index + 1) * 0x9E3779B97F4A7C15ULL);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
      : key_(splitmix64_mix(key)), counter_(counter) {}

  std::uint64_t next_u64() {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  // Standard normal by Box-Muller, one value per call (no cached pair).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace moorcast
