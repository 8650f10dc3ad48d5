#pragma once

// Shared helpers for the test binaries: terse config builders, deterministic
// random configurations, and a time-stepping reference simulator that has no
// event queue at all.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "ba/enumeration.hpp"
#include "ba/kinematics.hpp"
#include "ba/rng.hpp"

namespace ba::test {

inline std::vector<Speed> speeds_of(std::initializer_list<int> xs) {
  std::vector<Speed> v;
  v.reserve(xs.size());
  for (int x : xs) v.push_back(static_cast<Speed>(x));
  return v;
}

inline std::vector<Speed> random_speeds(std::uint64_t seed, std::size_t len,
                                        double p) {
  std::vector<Speed> v(len);
  for (std::size_t i = 0; i < len; ++i) v[i] = sample_speed(seed, i, p);
  return v;
}

// Advances every live particle on the doubled-time grid and annihilates any
// group sharing a position.  Quadratic, for small configurations only.  No
// particle skips past another between integer doubled times: positions move
// by at most one doubled unit per step while gaps shrink through every value.
inline SimOutcome reference_run(std::span<const Speed> sp) {
  const auto n = static_cast<std::int64_t>(sp.size());
  SimOutcome out;
  out.xi.assign(sp.size(), 2);
  out.event_of.assign(sp.size(), -1);
  std::vector<bool> alive(sp.size(), true);
  for (std::int64_t t2 = 0; t2 <= 2 * n; ++t2) {
    std::map<std::int64_t, std::vector<std::int32_t>> groups;
    for (std::int64_t i = 0; i < n; ++i) {
      if (!alive[static_cast<std::size_t>(i)]) continue;
      const std::int64_t pos2 = 2 * i + speed_value(sp[static_cast<std::size_t>(i)]) * t2;
      groups[pos2].push_back(static_cast<std::int32_t>(i));
    }
    for (const auto& [pos2, members] : groups) {
      if (members.size() < 2) continue;
      if (members.size() > 3) throw std::logic_error("four co-located particles");
      CollisionEvent ev;
      ev.time2 = t2;
      ev.pos2 = pos2;
      for (std::size_t k = 0; k < members.size(); ++k) ev.idx[k] = members[k];
      for (const std::int32_t i : members) {
        alive[static_cast<std::size_t>(i)] = false;
        out.event_of[static_cast<std::size_t>(i)] =
            static_cast<std::int32_t>(out.events.size());
      }
      out.events.push_back(ev);
    }
  }
  for (std::size_t i = 0; i < sp.size(); ++i)
    if (alive[i]) out.xi[i] = static_cast<std::int8_t>(speed_value(sp[i]));
  return out;
}


// Census built from the definitions alone: classify every window of the full
// 3^(2n-2) space and run the destroyer check on every [0, n] window.  No
// factorization, no pruning; cubic-ish and only for small depths.
inline CountTables census_by_definition(int depth) {
  CountTables t;
  t.depth = depth;
  t.per_n.resize(static_cast<std::size_t>(depth - 1));
  static const Speed kSp[3] = {Speed::MinusOne, Speed::Zero, Speed::PlusOne};
  Simulator sim;
  for (int n = 2; n <= depth; ++n) {
    CountTables::PerN& per = t.at(n);
    std::vector<Speed> w(static_cast<std::size_t>(2 * n), Speed::MinusOne);
    w[0] = Speed::Zero;
    w[1] = Speed::PlusOne;
    const int free_count = 2 * n - 2;
    std::vector<int> digit(static_cast<std::size_t>(free_count), 0);
    while (true) {
      int zeros = 0;
      for (int k = 0; k < free_count; ++k) {
        w[static_cast<std::size_t>(k + 2)] = kSp[digit[static_cast<std::size_t>(k)]];
        if (digit[static_cast<std::size_t>(k)] == 1) ++zeros;
      }
      const Classification c = classify(Configuration(w));
      if (c.kind != WindowClass::NotInAn) {
        per.an[{zeros, c.z1}] += 1;
        if (c.kind == WindowClass::InAnPrime) per.aprime[zeros] += 1;
      }
      int carry = 0;
      while (carry < free_count && digit[static_cast<std::size_t>(carry)] == 2) {
        digit[static_cast<std::size_t>(carry)] = 0;
        ++carry;
      }
      if (carry == free_count) break;
      digit[static_cast<std::size_t>(carry)] += 1;
    }

    std::vector<Speed> g(static_cast<std::size_t>(n + 1), Speed::MinusOne);
    g[0] = Speed::Zero;
    g[1] = Speed::PlusOne;
    g[static_cast<std::size_t>(n)] = Speed::MinusOne;
    const int gfree = n - 2;
    std::vector<int> gd(static_cast<std::size_t>(gfree), 0);
    while (true) {
      int zeros = 0;
      for (int k = 0; k < gfree; ++k) {
        g[static_cast<std::size_t>(k + 2)] = kSp[gd[static_cast<std::size_t>(k)]];
        if (gd[static_cast<std::size_t>(k)] == 1) ++zeros;
      }
      const SimOutcome& out = sim.run(g);
      if (destroyer_of(out, 1) == n) per.gamma_minus[zeros] += 1;
      int carry = 0;
      while (carry < gfree && gd[static_cast<std::size_t>(carry)] == 2) {
        gd[static_cast<std::size_t>(carry)] = 0;
        ++carry;
      }
      if (carry == gfree) break;
      gd[static_cast<std::size_t>(carry)] += 1;
    }
  }
  return t;
}

inline bool same_counts(const CountTables& a, const CountTables& b) {
  if (a.depth != b.depth) return false;
  for (int n = 2; n <= a.depth; ++n) {
    if (a.at(n).an != b.at(n).an) return false;
    if (a.at(n).aprime != b.at(n).aprime) return false;
    if (a.at(n).gamma_minus != b.at(n).gamma_minus) return false;
  }
  return true;
}

}  // namespace ba::test
