// Copyright 2026 The zne-lab Authors
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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <vector>

#include "zne/errors.hpp"

// Deterministic, keyed random streams.  Every consumer derives its own
// stream from (master seed, path of indices), so results do not depend on
// evaluation order or on how work is split across workers.

namespace zne::rng {

// splitmix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Order-sensitive fold of a key path into a stream seed.
inline constexpr std::uint64_t derive_stream(
    std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(master + kGolden);
  for (std::uint64_t c : path) {
    s = mix64(s ^ (c + kGolden + (s << 6) + (s >> 2)));
  }
  return s;
}

// First path component per consumer, so independent modules never collide
// on a stream even when their indices do.  These values are part of the
// reproducibility contract: changing them changes every seeded output.
inline constexpr std::uint64_t kEntryStreamTag = 0x7a6e655f656e7472ull;
inline constexpr std::uint64_t kProfileStreamTag = 0x70726f66696c6531ull;
inline constexpr std::uint64_t kReplicaStreamTag = 0x7265706c69636131ull;
inline constexpr std::uint64_t kShardStreamTag = 0x7368617264313233ull;

// xoshiro256++, seeded through splitmix64 so that any 64-bit seed yields a
// well-mixed state.  Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t st = seed;
    for (auto& word : s_) {
      st += kGolden;
      word = mix64(st);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Xoshiro256pp& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller.  Stateless on purpose: rejection loops in
// callers must not perturb unrelated draws.
inline double standard_normal(Xoshiro256pp& gen) {
  const double u1 = 1.0 - uniform01(gen);  // (0, 1], keeps log finite
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Draws `shots` outcomes from the distribution `probs` (assumed normalized)
// and returns per-outcome counts.  Inverse-CDF per draw.
inline std::vector<long long> multinomial(Xoshiro256pp& gen,
                                          const std::vector<double>& probs,
                                          long long shots) {
  if (probs.empty()) throw ValidationError("multinomial: empty distribution");
  if (shots < 0) throw ValidationError("multinomial: negative shot count");
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;  // guard against accumulated rounding
  std::vector<long long> counts(probs.size(), 0);
  for (long long s = 0; s < shots; ++s) {
    const double u = uniform01(gen);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    counts[static_cast<std::size_t>(it - cdf.begin())] += 1;
  }
  return counts;
}

}  // namespace zne::rng
