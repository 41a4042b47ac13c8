// Copyright 2026 The tksvm authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace tksvm {

// SplitMix64: counter-based generator (Steele, Lea, Flood 2014). Chosen over
// the std:: engines because its output is fully specified, so seeded runs are
// reproducible across platforms, and streams can be split by hashing.
inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64_mix(state_ += kSplitMixGamma); }

  std::uint64_t operator()() { return next_u64(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ull; }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Debiased (Lemire's rejection method).
  std::uint64_t next_below(std::uint64_t n) {
    __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<__uint128_t>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool next_bool() { return next_u64() >> 63; }

 private:
  std::uint64_t state_;
};

// Stream splitting: stream k of a master seed is an independent SplitMix64
// sequence. Samplers give shot i the stream derive_stream(seed, i), so a run
// produces identical output no matter how shots are scheduled across threads.
inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::uint64_t s = splitmix64_mix(master_seed + kSplitMixGamma * (stream_index + 1));
  return Rng(splitmix64_mix(s ^ 0xA0761D6478BD642Full));
}

}  // namespace tksvm
