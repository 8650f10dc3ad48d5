#include "ba/bounds.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace ba {
namespace {

constexpr int kScanPoints = 512;

double bisect(double lo, double hi, const auto& f) {
  // f(lo) < 0 <= ... < f(hi); 60 halvings take the bracket below 1e-17.
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

void require_tables(const CountTables* tables, BoundLevel level) {
  if (!tables && (level == BoundLevel::L2 || level == BoundLevel::L3))
    throw std::invalid_argument("bound levels 2 and 3 need count tables");
}

void require_open_unit(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("p must lie in (0,1)");
}

}  // namespace

double eval_m(const CountTables& tables, double p) {
  const double q = (1.0 - p) / 2.0;
  double gain = 0.0;
  for (int n = 2; n <= tables.depth; ++n) {
    for (const auto& [key, c] : tables.at(n).an) {
      const auto& [i, z1] = key;
      gain += c.convert_to<double>() * (z1 - 1) * std::pow(p, i) *
              std::pow(q, 2 * n - 2 - i);
    }
  }
  return 1.0 + gain;
}

Rational eval_m_exact(const CountTables& tables, const Rational& p) {
  const Rational q = (1 - p) / 2;
  Rational gain = 0;
  for (int n = 2; n <= tables.depth; ++n) {
    for (const auto& [key, c] : tables.at(n).an) {
      const auto& [i, z1] = key;
      gain += Rational(c) * (z1 - 1) * rat_pow(p, i) *
              rat_pow(q, 2 * n - 2 - i);
    }
  }
  return 1 + gain;
}

double eval_b(const CountTables& tables, double p) {
  const double q = (1.0 - p) / 2.0;
  double total = 0.0;
  for (int n = 2; n <= tables.depth; ++n) {
    for (const auto& [i, c] : tables.at(n).aprime)
      total += c.convert_to<double>() * std::pow(p, i) *
               std::pow(q, 2 * n - 2 - i);
  }
  if (total >= 1.0)
    throw DataError("b(p) >= 1; count tables are inconsistent");
  return total;
}

Rational eval_b_exact(const CountTables& tables, const Rational& p) {
  const Rational q = (1 - p) / 2;
  Rational total = 0;
  for (int n = 2; n <= tables.depth; ++n) {
    for (const auto& [i, c] : tables.at(n).aprime)
      total += Rational(c) * rat_pow(p, i) * rat_pow(q, 2 * n - 2 - i);
  }
  if (total >= 1)
    throw DataError("b(p) >= 1; count tables are inconsistent");
  return total;
}

double bound(const CountTables* tables, double p, BoundLevel level) {
  require_open_unit(p);
  require_tables(tables, level);
  const double q = (1.0 - p) / 2.0;
  switch (level) {
    case BoundLevel::L0:
      return 2.0 * p;
    case BoundLevel::L1:
      return 2.0 * p + q;
    case BoundLevel::L2:
      return 2.0 * p + q * eval_m(*tables, p);
    case BoundLevel::L3: {
      const double m = eval_m(*tables, p);
      const double b = eval_b(*tables, p);
      return 2.0 * p + q * (m + b / (1.0 - b) * (m - 1.0));
    }
  }
  throw std::logic_error("unreachable bound level");
}

Rational bound_exact(const CountTables* tables, const Rational& p,
                     BoundLevel level) {
  if (!(p > 0 && p < 1))
    throw std::invalid_argument("p must lie in (0,1)");
  require_tables(tables, level);
  const Rational q = (1 - p) / 2;
  switch (level) {
    case BoundLevel::L0:
      return 2 * p;
    case BoundLevel::L1:
      return 2 * p + q;
    case BoundLevel::L2:
      return 2 * p + q * eval_m_exact(*tables, p);
    case BoundLevel::L3: {
      const Rational m = eval_m_exact(*tables, p);
      const Rational b = eval_b_exact(*tables, p);
      return 2 * p + q * (m + b / (1 - b) * (m - 1));
    }
  }
  throw std::logic_error("unreachable bound level");
}

double find_threshold(const CountTables* tables, BoundLevel level, double tol,
                      double scan_lo, double scan_hi) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(0.0 <= scan_lo && scan_lo < scan_hi && scan_hi <= 1.0))
    throw std::invalid_argument("scan range must satisfy 0 <= lo < hi <= 1");
  require_tables(tables, level);

  // Coarse scan on interior points; the crossing pattern of [bound > 1] must
  // be a single false block followed by a single true block.
  std::vector<double> grid(kScanPoints);
  std::vector<bool> above(kScanPoints);
  const double step = (scan_hi - scan_lo) / (kScanPoints + 1);
  for (int k = 0; k < kScanPoints; ++k) {
    grid[static_cast<std::size_t>(k)] = scan_lo + (k + 1) * step;
    above[static_cast<std::size_t>(k)] =
        bound(tables, grid[static_cast<std::size_t>(k)], level) > 1.0;
  }
  int first_above = -1;
  for (int k = 0; k < kScanPoints; ++k) {
    if (above[static_cast<std::size_t>(k)]) {
      first_above = k;
      break;
    }
  }
  if (first_above < 0)
    throw NoCrossingError("bound never exceeds 1 on the scanned range");
  if (first_above == 0)
    throw NoCrossingError("bound already exceeds 1 at the scan's left edge");
  for (int k = first_above; k < kScanPoints; ++k) {
    if (!above[static_cast<std::size_t>(k)])
      throw MultipleCrossingsError(
          "bound crosses 1 more than once on the scanned range");
  }

  double lo = grid[static_cast<std::size_t>(first_above - 1)];
  double hi = grid[static_cast<std::size_t>(first_above)];
  while (hi - lo > tol * 0.5) {
    const double mid = 0.5 * (lo + hi);
    (bound(tables, mid, level) > 1.0 ? hi : lo) = mid;
  }

  // Certify the result the way it is stated: above 1 at p*, not above at
  // p* - tol.  A failure here means the scan missed a wiggle.
  if (!(bound(tables, hi, level) > 1.0) ||
      (hi - tol > 0.0 && bound(tables, hi - tol, level) > 1.0))
    throw MultipleCrossingsError("threshold certification failed");
  return hi;
}

double heuristic_w(double p) {
  const double q = (1.0 - p) / 2.0;
  return p - 2.0 * p * q + p * q * q;
}

double heuristic_z(double p) {
  const double q = (1.0 - p) / 2.0;
  return 2.0 * (q - q * q - p * q);
}

double heuristic_pc() {
  return bisect(1e-9, 0.5, [](double p) {
    const double w = heuristic_w(p);
    const double z = heuristic_z(p);
    return w / (w + z) - 0.25;
  });
}

double heuristic_pc_literal() {
  return bisect(1e-9, 0.5,
                [](double p) { return heuristic_w(p) - heuristic_z(p) / 4.0; });
}

double triple_collision_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("p must lie in [0,1]");
  const double q = (1.0 - p) / 2.0;
  return p * q * q;
}

}  // namespace ba
