#pragma once

// Randomized cross-checks.  mc_check_tables samples windows straight from
// the speed distribution and classifies them, giving an estimate of the
// window probabilities that is independent of the census sweep; agreement is
// reported in standard-error units.  mc_seed_survival estimates the chance
// the seed outlives a finite window of sampled speeds.

#include <cstdint>

#include "ba/enumeration.hpp"

namespace ba {

struct TableCheckResult {
  int n = 0;
  double p = 0.0;
  std::uint64_t reps = 0;
  // Window probability: empirical, exact from tables, discrepancy / se.
  double p_an_mc = 0.0;
  double p_an_exact = 0.0;
  double p_an_sigma = 0.0;
  // Expected surviving-inert excess (z1 - 1 on qualifying windows, else 0).
  double ez_mc = 0.0;
  double ez_exact = 0.0;
  double ez_sigma = 0.0;
};

// Samples reps windows (0, +1, nu^(2n-2)) and classifies each.  reps must be
// 0 or >= 1000; with reps == 0 the empirical fields and sigmas are NaN and
// only the exact values are filled in.  Standard errors use the exact
// moments, so a sigma field reads "how many standard deviations off".
TableCheckResult mc_check_tables(const CountTables& tables, double p, int n,
                                 std::uint64_t reps, std::uint64_t seed,
                                 int threads = 0);

// Fraction of reps in which the seed survives a configuration of `window`
// sampled speeds to its right.  Nonincreasing in window in expectation.
double mc_seed_survival(double p, int window, std::uint64_t reps,
                        std::uint64_t seed, int threads = 0);

}  // namespace ba
