// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>

namespace upb {

// SplitMix64 (Steele, Lea & Flood 2014). The whole generator state is one
// 64-bit word, so it can be stored, passed across the C API and replayed.
// Uniform and normal variates are derived here rather than through <random>
// distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t state = 0) noexcept : state_(state) {}

  // Independent generator for sub-stream `index` of `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index) noexcept {
    Rng mixer(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return Rng(mixer.next());
  }

  std::uint64_t state() const noexcept { return state_; }

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // [lo, hi)
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; one variate per call.
  double normal() noexcept;

 private:
  std::uint64_t state_;
};

}  // namespace upb
