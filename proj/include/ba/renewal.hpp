#pragma once

// Renewal sampler for the seeded process: an inert seed at the origin,
// unrevealed speeds to its right.  Speeds are revealed one index at a time
// until the revealed prefix is certifiably finished: nothing that could still
// be revealed can change its outcome, and only inert particles survive in it.
// The revealed length at that moment is the renewal index eta and the number
// of surviving inert particles is the offspring count z of the embedded
// branching process.  Revelation is capped by a horizon; hitting it yields a
// censored sample that all estimators count as zero offspring, which is the
// conservative direction for lower bounds.

#include <cstdint>
#include <vector>

#include "ba/kinematics.hpp"
#include "ba/rng.hpp"

namespace ba {

// Source of speeds at indices >= 1 (index 0 is always the inert seed).
struct SpeedSource {
  virtual Speed speed_at(std::int64_t i) = 0;
  virtual ~SpeedSource() = default;
};

// nu-distributed lazy speed sequence.  Each index is drawn exactly once as a
// pure function of (rng_seed, index, p); access order cannot change it.
class LazyConfiguration final : public SpeedSource {
 public:
  LazyConfiguration(std::uint64_t rng_seed, double p)
      : seed_(rng_seed), p_(p), revealed_(1, Speed::Zero) {}

  Speed speed_at(std::int64_t i) override {
    while (static_cast<std::int64_t>(revealed_.size()) <= i) {
      revealed_.push_back(
          sample_speed(seed_, static_cast<std::uint64_t>(revealed_.size()), p_));
    }
    return revealed_[static_cast<std::size_t>(i)];
  }

  std::int64_t revealed_max() const {
    return static_cast<std::int64_t>(revealed_.size()) - 1;
  }
  const std::vector<Speed>& revealed() const { return revealed_; }
  double p() const { return p_; }

 private:
  std::uint64_t seed_;
  double p_;
  std::vector<Speed> revealed_;
};

enum class RenewalStatus { Renewed, Censored };

struct RenewalSample {
  RenewalStatus status = RenewalStatus::Censored;
  std::int64_t eta = 0;   // renewal index; meaningful only when Renewed
  std::int64_t z = 0;     // surviving inert count in [0, eta]; 0 if censored
  std::int64_t revealed_max = 0;
  std::int64_t horizon = 0;
};

// Reveals indices 1, 2, ... from `source` and stops at the first prefix
// [0, r] whose outcome is closed:
//   * no +1 or -1 particle survives the prefix dynamics, and
//   * every pair collision of a +1 at i with an inert at j has its
//     dependence window [i, 2j - i] inside the prefix.  A -1 revealed at an
//     index <= 2j - i could still reach j first and undo that collision;
//     collisions that consumed a -1 can never be undone from the right.
// Never reads an index beyond the returned eta; censors at the horizon.
RenewalSample sample_renewal(SpeedSource& source, std::int64_t horizon);
RenewalSample sample_renewal(LazyConfiguration& lazy, std::int64_t horizon);

struct OffspringEstimate {
  double mean_lower = 0.0;    // censoring counted as zero offspring
  double censor_rate = 0.0;
  double ci_halfwidth = 0.0;  // 1.96 * standard error of mean_lower
};

OffspringEstimate estimate_offspring_mean(double p, std::int64_t horizon,
                                          std::int64_t reps, std::uint64_t seed,
                                          int threads = 0);

struct GenerationsResult {
  bool extinct = false;
  std::vector<std::uint64_t> trace;  // population per generation, [0] == 1
};

// Expands the branching process depth-first, one renewal sample per member.
// Members alive at max_generations are left unexpanded; node_cap bounds the
// total number of samples (a capped run reports extinct = false).
GenerationsResult simulate_generations(double p, std::int64_t horizon,
                                       int max_generations, std::uint64_t seed,
                                       std::uint64_t node_cap = 10'000'000);

}  // namespace ba
