// Copyright 2026 The qisburst Authors.
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

// Counter-based random numbers (Philox4x32-10, Salmon et al. SC'11).
//
// Every random quantity in the library is a pure function of a 64-bit key
// and a 128-bit counter. Sensor draws use the counter
// (x, y, frame, kind << 16 | draw), so a pixel's noise does not depend on
// which thread computes it or in what order.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace qis::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds.
constexpr Counter philox4x32(Counter ctr, Key key) noexcept {
  constexpr std::uint32_t kMulA = 0xD2511F53;
  constexpr std::uint32_t kMulB = 0xCD9E8D57;
  constexpr std::uint32_t kWeylA = 0x9E3779B9;
  constexpr std::uint32_t kWeylB = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  return ctr;
}

constexpr Key key_from_seed(std::uint64_t seed) noexcept {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// SplitMix64 finalizer; used to derive child seeds from (seed, tag).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  return mix64(seed ^ mix64(tag));
}

/// 53-bit uniform in [0, 1) from two 32-bit words.
constexpr double to_unit(std::uint32_t a, std::uint32_t b) noexcept {
  return static_cast<double>((static_cast<std::uint64_t>(a >> 5) << 26) | (b >> 6)) *
         0x1.0p-53;
}

enum class DrawKind : std::uint32_t {
  kPhotonArrival = 1,
  kReadNoise = 2,
  kTrajectory = 3,
  kJitter = 4,
  kCrop = 5,
  kLocalMotion = 6,
  kScene = 7,
};

/// Stream of uniforms addressed by (kind, a, b, c). Consecutive calls bump a
/// 16-bit draw index inside the counter; each Philox block yields two doubles.
class Stream {
 public:
  constexpr Stream(std::uint64_t seed, DrawKind kind, std::uint32_t a, std::uint32_t b,
                   std::uint32_t c) noexcept
      : key_(key_from_seed(seed)), base_{a, b, c, static_cast<std::uint32_t>(kind) << 16} {}

  double uniform() noexcept {
    if (cached_) {
      cached_ = false;
      return spare_;
    }
    Counter ctr = base_;
    ctr[3] |= (block_++ & 0xFFFFu);
    const Counter out = philox4x32(ctr, key_);
    spare_ = to_unit(out[2], out[3]);
    cached_ = true;
    return to_unit(out[0], out[1]);
  }

  /// Uniform in (0, 1].
  double uniform_open_low() noexcept { return 1.0 - uniform(); }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes one Philox block.
  double normal() noexcept {
    cached_ = false;
    const double u1 = uniform_open_low();
    const double u2 = uniform();
    cached_ = false;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  Key key_;
  Counter base_;
  std::uint32_t block_ = 0;
  double spare_ = 0.0;
  bool cached_ = false;
};

}  // namespace qis::rng
