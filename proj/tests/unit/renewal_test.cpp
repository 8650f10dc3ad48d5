#include "ba/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "../support.hpp"

using namespace ba;
using test::speeds_of;

namespace {

// Scripted speeds at indices 1.. with a filler beyond; records the highest
// index the sampler ever asked for.
struct ScriptedSource final : SpeedSource {
  std::vector<Speed> tail;
  Speed filler = Speed::PlusOne;
  std::int64_t max_read = 0;

  Speed speed_at(std::int64_t i) override {
    max_read = std::max(max_read, i);
    const auto k = static_cast<std::size_t>(i - 1);
    return k < tail.size() ? tail[k] : filler;
  }
};

// Replays a frozen prefix and replaces everything beyond it.
struct RewrittenTail final : SpeedSource {
  std::vector<Speed> prefix;  // speeds at indices 0..prefix.size()-1
  std::uint64_t alt_seed = 0;
  double p = 0.3;

  Speed speed_at(std::int64_t i) override {
    const auto k = static_cast<std::size_t>(i);
    if (k < prefix.size()) return prefix[k];
    return sample_speed(alt_seed, k, p);
  }
};

}  // namespace

TEST_CASE("first speed alone can close the prefix") {
  ScriptedSource inert;
  inert.tail = speeds_of({0});
  const RenewalSample a = sample_renewal(inert, 100);
  CHECK(a.status == RenewalStatus::Renewed);
  CHECK(a.eta == 1);
  CHECK(a.z == 2);
  CHECK(a.revealed_max == 1);
  CHECK(inert.max_read == 1);

  ScriptedSource minus;
  minus.tail = speeds_of({-1});
  const RenewalSample b = sample_renewal(minus, 100);
  CHECK(b.status == RenewalStatus::Renewed);
  CHECK(b.eta == 1);
  CHECK(b.z == 0);
  CHECK(minus.max_read == 1);
}

TEST_CASE("+1 resolved by a -1 renews immediately") {
  ScriptedSource src;
  src.tail = speeds_of({1, -1});
  const RenewalSample s = sample_renewal(src, 100);
  CHECK(s.status == RenewalStatus::Renewed);
  CHECK(s.eta == 2);
  CHECK(s.z == 1);
  CHECK(src.max_read == 2);
}

TEST_CASE("+1 resolved by an inert waits for its window") {
  // (0, 1, 0): the pair (1 -> 2) has window 2*2-1 = 3, so revelation must
  // continue; the speed at 3 turns the event into a triple and closes it.
  ScriptedSource src;
  src.tail = speeds_of({1, 0, -1});
  const RenewalSample s = sample_renewal(src, 100);
  CHECK(s.status == RenewalStatus::Renewed);
  CHECK(s.eta == 3);
  CHECK(s.z == 1);
  CHECK(src.max_read == 3);
}

TEST_CASE("unresolvable prefix censors exactly at the horizon") {
  ScriptedSource src;  // every index +1: nothing ever closes
  const RenewalSample s = sample_renewal(src, 500);
  CHECK(s.status == RenewalStatus::Censored);
  CHECK(s.z == 0);
  CHECK(s.revealed_max == 500);
  CHECK(s.horizon == 500);
}

TEST_CASE("horizon below two is rejected") {
  ScriptedSource src;
  CHECK_THROWS_AS(sample_renewal(src, 1), std::invalid_argument);
}

TEST_CASE("renewed samples verify as closed windows") {
  int renewed = 0;
  for (std::uint64_t k = 0; k < 3000; ++k) {
    const double p = (k % 3 == 0) ? 0.25 : (k % 3 == 1 ? 0.35 : 0.5);
    LazyConfiguration lazy(derive_seed(404, k), p);
    const RenewalSample s = sample_renewal(lazy, 4000);
    REQUIRE(lazy.revealed_max() <= std::max<std::int64_t>(s.revealed_max, 1));
    if (s.status != RenewalStatus::Renewed) continue;
    ++renewed;
    REQUIRE(s.revealed_max == s.eta);
    REQUIRE(lazy.revealed_max() == s.eta);

    const std::vector<Speed> window(lazy.revealed().begin(),
                                    lazy.revealed().begin() + s.eta + 1);
    const SimOutcome out = run_ba(Configuration(window));
    std::int64_t z = 0;
    for (const std::int8_t v : out.xi) {
      REQUIRE((v == 0 || v == 2));
      if (v == 0) ++z;
    }
    REQUIRE(z == s.z);
    if (s.eta > 1) REQUIRE(out.xi[0] == 0);
    for (const CollisionEvent& ev : out.events) {
      if (ev.is_triple()) continue;
      if (window[static_cast<std::size_t>(ev.idx[0])] == Speed::PlusOne &&
          window[static_cast<std::size_t>(ev.idx[1])] == Speed::Zero) {
        REQUIRE(2 * static_cast<std::int64_t>(ev.idx[1]) - ev.idx[0] <= s.eta);
      }
    }
  }
  CHECK(renewed >= 2500);
}

TEST_CASE("sample is blind to everything beyond its renewal index") {
  int renewed = 0;
  for (std::uint64_t k = 0; k < 2000; ++k) {
    LazyConfiguration lazy(derive_seed(505, k), 0.3);
    const RenewalSample s = sample_renewal(lazy, 4000);
    if (s.status != RenewalStatus::Renewed) continue;
    ++renewed;

    RewrittenTail other;
    other.prefix.assign(lazy.revealed().begin(),
                        lazy.revealed().begin() + s.eta + 1);
    other.alt_seed = derive_seed(606, k);
    const RenewalSample t = sample_renewal(other, 4000);
    REQUIRE(t.status == RenewalStatus::Renewed);
    REQUIRE(t.eta == s.eta);
    REQUIRE(t.z == s.z);
  }
  CHECK(renewed >= 1800);
}

TEST_CASE("renewal decision does not depend on the horizon") {
  for (std::uint64_t k = 0; k < 400; ++k) {
    LazyConfiguration a(derive_seed(707, k), 0.25);
    LazyConfiguration b(derive_seed(707, k), 0.25);
    const RenewalSample s6 = sample_renewal(a, 6);
    const RenewalSample s24 = sample_renewal(b, 24);
    if (s6.status == RenewalStatus::Renewed) {
      REQUIRE(s24.status == RenewalStatus::Renewed);
      REQUIRE(s24.eta == s6.eta);
      REQUIRE(s24.z == s6.z);
    } else {
      REQUIRE(s6.revealed_max == 6);
    }
  }
}

TEST_CASE("lazy speeds are a pure function of seed and index") {
  LazyConfiguration fwd(31337, 0.3);
  std::vector<Speed> in_order;
  for (std::int64_t i = 1; i <= 64; ++i) in_order.push_back(fwd.speed_at(i));

  LazyConfiguration bwd(31337, 0.3);
  for (std::int64_t i = 64; i >= 1; --i) {
    CHECK(bwd.speed_at(i) == in_order[static_cast<std::size_t>(i - 1)]);
  }
}

TEST_CASE("all-inert speeds give exactly two offspring") {
  const OffspringEstimate est = estimate_offspring_mean(1.0, 100, 2000, 9);
  CHECK(est.mean_lower == 2.0);
  CHECK(est.censor_rate == 0.0);
  CHECK(est.ci_halfwidth == 0.0);
}

TEST_CASE("inert-free speeds are subcritical") {
  const OffspringEstimate est = estimate_offspring_mean(0.0, 256, 2000, 10);
  CHECK(est.mean_lower < 1.0);
  CHECK(est.mean_lower > 0.0);
}

TEST_CASE("offspring estimate is deterministic across thread counts") {
  const OffspringEstimate a = estimate_offspring_mean(0.35, 500, 4000, 77, 1);
  const OffspringEstimate b = estimate_offspring_mean(0.35, 500, 4000, 77, 4);
  const OffspringEstimate c = estimate_offspring_mean(0.35, 500, 4000, 77, 4);
  CHECK(a.mean_lower == b.mean_lower);
  CHECK(a.censor_rate == b.censor_rate);
  CHECK(a.ci_halfwidth == b.ci_halfwidth);
  CHECK(b.mean_lower == c.mean_lower);
}

TEST_CASE("branching trace doubles when every member has two children") {
  const GenerationsResult res = simulate_generations(1.0, 100, 6, 5);
  REQUIRE(res.trace.size() == 7);
  for (std::size_t g = 0; g < res.trace.size(); ++g) {
    CHECK(res.trace[g] == (std::uint64_t{1} << g));
  }
  CHECK(!res.extinct);
}

TEST_CASE("inert-free branching dies out") {
  const GenerationsResult res = simulate_generations(0.0, 128, 30, 11);
  CHECK(res.extinct);
  CHECK(res.trace.back() == 0);
  CHECK(res.trace[0] == 1);
}

TEST_CASE("node cap reports non-extinction") {
  const GenerationsResult res = simulate_generations(1.0, 100, 40, 6, 100);
  CHECK(!res.extinct);
  CHECK(res.trace[0] == 1);
}

TEST_CASE("extinction frequency matches the sampled offspring law") {
  // Empirical extinction over independent trees against the smallest fixed
  // point of the empirical offspring generating function.
  const double p = 0.45;
  int extinct = 0;
  const int trees = 300;
  for (int t = 0; t < trees; ++t) {
    if (simulate_generations(p, 1000, 12, derive_seed(808, static_cast<std::uint64_t>(t)))
            .extinct)
      ++extinct;
  }
  const double freq = static_cast<double>(extinct) / trees;
  CHECK(freq > 0.0);
  CHECK(freq < 1.0);

  std::vector<std::int64_t> zs;
  for (std::uint64_t k = 0; k < 4000; ++k) {
    LazyConfiguration lazy(derive_seed(909, k), p);
    const RenewalSample s = sample_renewal(lazy, 1000);
    zs.push_back(s.status == RenewalStatus::Renewed ? s.z : 0);
  }
  double root = 0.0;
  for (int it = 0; it < 400; ++it) {
    double acc = 0.0;
    for (const std::int64_t z : zs) acc += std::pow(root, static_cast<double>(z));
    root = acc / static_cast<double>(zs.size());
  }
  CHECK(std::fabs(freq - root) < 0.15);
}
