#pragma once

// Lower bounds on the expected offspring count of the seed's renewal process
// and the critical-density estimates they imply.  Levels form a cascade:
//   L0: 2p                      (offspring from an inert first particle)
//   L1: 2p + q                  (adds the +1 first-particle case)
//   L2: 2p + q*m(p)             (adds the exact window gain m from tables)
//   L3: 2p + q*(m + b/(1-b)*(m-1))  (adds the chained +1-tail windows)
// with q = (1-p)/2.  Each level dominates the previous one pointwise, so the
// p where the bound crosses 1 can only move left as the level or the table
// depth grows.

#include <stdexcept>

#include "ba/enumeration.hpp"
#include "ba/numeric.hpp"

namespace ba {

enum class BoundLevel { L0 = 0, L1 = 1, L2 = 2, L3 = 3 };

// Thrown by find_threshold when the coarse scan sees no clean single
// crossing of 1.
struct NoCrossingError : DataError {
  using DataError::DataError;
};
struct MultipleCrossingsError : DataError {
  using DataError::DataError;
};

// Truncated expected window gain, always >= 1.
double eval_m(const CountTables& tables, double p);
Rational eval_m_exact(const CountTables& tables, const Rational& p);

// Probability that some prefix window leaves exactly one active survivor, a
// +1 at its right edge.  Must stay below 1; anything else means the tables
// are corrupt.
double eval_b(const CountTables& tables, double p);
Rational eval_b_exact(const CountTables& tables, const Rational& p);

// Lower bound on the expected offspring count at density p.  Tables may be
// null for L0/L1; L2/L3 require them.
double bound(const CountTables* tables, double p, BoundLevel level);
Rational bound_exact(const CountTables* tables, const Rational& p,
                     BoundLevel level);

// Smallest p with bound(p) > 1, certified by bound(p*) > 1 and
// bound(p* - tol) <= 1.  A 512-point scan of (scan_lo, scan_hi) must show a
// single false->true transition of [bound > 1] before bisection refines it.
double find_threshold(const CountTables* tables, BoundLevel level, double tol,
                      double scan_lo = 0.0, double scan_hi = 1.0);

// Density-balance heuristic for the critical p.  After one unit of time a
// density-p speed mix keeps inert mass w(p) and active mass z(p), with the
// triple-collision correction included.  Requiring the inert share to hold
// at the critical quarter, w/(w+z) = 1/4, puts the root near .2450; reading
// the balance literally as w = z/4 instead puts it near .2115.  Both roots
// are exposed.
double heuristic_w(double p);
double heuristic_z(double p);
double heuristic_pc();
double heuristic_pc_literal();

// Chance that a given (+1, 0, -1) run of three meets in one point: p*q^2.
double triple_collision_probability(double p);

}  // namespace ba
