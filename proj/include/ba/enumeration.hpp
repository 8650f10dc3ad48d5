#pragma once

// Exact census of the windows that drive the offspring-mean lower bounds.
// For each n the census covers three events over prefixes that start with an
// inert seed and a +1 particle:
//   * A_n:  the +1 at index 1 annihilates an inert particle at index n in a
//           plain pair collision.  Determined by the window [0, 2n-1].
//   * A'_n: additionally the only surviving active particle in the window is
//           a +1 at index 2n-1.
//   * the gamma-minus event: the destroyer of index 1 is index n and has
//           speed -1.  Determined by [0, n].
// Counts are keyed by the number I of inert entries among the free
// coordinates (indices 2..2n-1, resp. 2..n-1) and, for A_n, by the number z1
// of surviving inert particles in the window, so that every probability and
// conditional moment is a polynomial in p and q = (1-p)/2 with these counts
// as coefficients.

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ba/kinematics.hpp"
#include "ba/numeric.hpp"

namespace ba {

enum class WindowClass { NotInAn, InAn, InAnPrime };

struct Classification {
  WindowClass kind = WindowClass::NotInAn;
  int z1 = 0;  // surviving inert count; meaningful when kind != NotInAn
};

// Classifies a window of length 2n (entries 0 and 1 must be 0 and +1).
Classification classify(const Configuration& window);

struct TableMeta {
  std::string generator;
  double walltime_s = 0.0;
  std::string checksum;
};

struct CountTables {
  struct PerN {
    std::map<std::pair<int, int>, Count> an;  // (I, z1) -> count
    std::map<int, Count> aprime;              // I -> count
    std::map<int, Count> gamma_minus;         // I -> count
  };

  int depth = 0;
  std::vector<PerN> per_n;  // per_n[k] holds n = k + 2
  TableMeta meta;

  const PerN& at(int n) const { return per_n.at(static_cast<std::size_t>(n - 2)); }
  PerN& at(int n) { return per_n.at(static_cast<std::size_t>(n - 2)); }
};

// Per-n progress callback: (n, configurations swept for this n).
using EnumerateProgress = std::function<void(int, std::uint64_t)>;

// Builds the census for all n in [2, depth].  The sweep never visits the raw
// 3^(2n-2) window space: conditioned on the seed pair colliding at n, the
// interior [2, n-1] and the far side [n+1, 2n-1] evolve independently, so
// both sides are swept separately and their zero-counts convolved.  Output is
// deterministic and independent of the thread count.
CountTables enumerate_tables(int depth, int threads = 0,
                             const EnumerateProgress& progress = nullptr);

// Table files are JSON with counts as decimal strings and an FNV-1a checksum
// over the canonical payload; load re-derives and verifies the checksum.
void save_tables(const CountTables& tables, const std::string& path);
CountTables load_tables(const std::string& path);
std::string tables_checksum(const CountTables& tables);

// File and table-consistency failures (bad version, checksum, malformed
// counts).  The CLI maps this to its data-error exit code.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// P(gamma_1 <= depth) at parameter p: total weight of all census events.
double gamma_tail(const CountTables& tables, double p);
Rational gamma_tail_exact(const CountTables& tables, const Rational& p);

}  // namespace ba
