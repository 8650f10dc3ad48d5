#pragma once

// Counter-based randomness.  Every speed draw is a pure function of
// (seed, index), so revealing index i never depends on the order or number
// of earlier draws.  That is what makes suffix-rewrite tests on the renewal
// sampler meaningful and all estimators reproducible under any thread count.

#include <cstdint>

#include "ba/kinematics.hpp"

namespace ba {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer; full-avalanche 64 -> 64 mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// i-th output of the SplitMix64 stream seeded with `seed`.
constexpr std::uint64_t stream_at(std::uint64_t seed, std::uint64_t i) {
  return mix64(seed + (i + 1) * kGolden);
}

// Independent child seed k of a parent seed (replicas, branching members).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
  return mix64(seed ^ mix64(k + 0xD6E8FEB86659FD93ULL));
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double uniform01(std::uint64_t seed, std::uint64_t i) {
  return static_cast<double>(stream_at(seed, i) >> 11) * 0x1.0p-53;
}

// Speed draw: probability p of standing still, (1-p)/2 for each direction.
// Frozen mapping: u < p -> 0, then the lower half of the remainder -> -1.
inline Speed sample_speed(std::uint64_t seed, std::uint64_t i, double p) {
  const double u = uniform01(seed, i);
  if (u < p) return Speed::Zero;
  if (u < p + (1.0 - p) * 0.5) return Speed::MinusOne;
  return Speed::PlusOne;
}

}  // namespace ba
