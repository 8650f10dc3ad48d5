#pragma once

// Shared numeric types: exact configuration counts and exact rationals for
// the evaluation paths where the final digits matter.

#include <boost/multiprecision/cpp_int.hpp>

namespace ba {

using Count = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// x^e for small nonnegative exponents.
inline Rational rat_pow(const Rational& x, int e) {
  Rational r = 1;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

}  // namespace ba
