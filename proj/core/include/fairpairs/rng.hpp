// Copyright the FairPairs contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>

namespace fairpairs {

// Deterministic random stream built on the splitmix64 generator.
//
// The library never uses <random> distributions because their output is not
// pinned by the standard; every draw here is fully specified, so a given
// (seed, index) pair produces the same simulation on every platform and
// compiler. Streams for independent units of work (one simulated impression
// each) are derived by hashing the experiment seed together with the unit's
// index, which makes sharding a run across workers a no-op for its output.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  // Independent stream for one unit of work. The (seed, index) pair is mixed
  // into a fresh starting state so streams with adjacent indexes land far
  // apart in the generator's cycle.
  static RngStream derived(std::uint64_t seed, std::uint64_t index) {
    return RngStream(mix(mix(seed + kGamma) + index * kGamma));
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform double in [0, 1), using the top 53 bits of one draw.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform integer in [0, bound) via the fixed-point multiply trick.
  // The modulo bias is at most bound / 2^64, far below anything the
  // statistical tests in this project could resolve.
  std::uint32_t uniform_int(std::uint32_t bound) {
    const auto wide = static_cast<unsigned __int128>(next_u64()) *
                      static_cast<unsigned __int128>(bound);
    return static_cast<std::uint32_t>(wide >> 64);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace fairpairs
