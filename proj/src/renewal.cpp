#include "ba/renewal.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "ba/parallel.hpp"

namespace ba {

namespace {

// Largest dependence window over pair collisions of type (+1 at i, 0 at j).
// Those are the only events a later reveal can still disturb: a -1 revealed
// at index m < 2j - i would reach position j at time m - j, before the +1
// arrives there at time j - i.  Events that consumed a -1 are safe because
// nothing revealed further right can overtake a leftward particle, and a
// triple already carries its -1 at exactly index 2j - i.
std::int64_t max_pair_window(std::span<const Speed> sp, const SimOutcome& out) {
  std::int64_t w = 0;
  for (const CollisionEvent& ev : out.events) {
    if (ev.is_triple()) continue;
    const std::int32_t i = ev.idx[0];
    const std::int32_t j = ev.idx[1];
    if (sp[i] == Speed::PlusOne && sp[j] == Speed::Zero) {
      w = std::max(w, 2 * static_cast<std::int64_t>(j) - i);
    }
  }
  return w;
}

}  // namespace

RenewalSample sample_renewal(SpeedSource& source, std::int64_t horizon) {
  if (horizon < 2) throw std::invalid_argument("horizon must be >= 2");

  std::vector<Speed> prefix{Speed::Zero};
  Simulator sim;
  std::int64_t r = 0;
  while (r < horizon) {
    const Speed revealed = source.speed_at(r + 1);
    prefix.push_back(revealed);
    ++r;
    // A +1 at the right edge outlives the whole prefix (nothing to its right
    // exists, nothing to its left can catch it), so the prefix cannot be
    // closed and the run is skipped.
    if (revealed == Speed::PlusOne) continue;
    const SimOutcome& out = sim.run(prefix);

    bool active_survivor = false;
    std::int64_t z = 0;
    for (const std::int8_t v : out.xi) {
      if (v == 0) ++z;
      if (v == 1 || v == -1) {
        active_survivor = true;
        break;
      }
    }
    if (active_survivor) continue;
    if (max_pair_window(prefix, out) > r) continue;

    if (r > 1 && out.xi[0] != 0) {
      // The certificate renews strictly before any -1 that could reach the
      // seed is revealed; a dead seed here means the certificate is broken.
      throw std::logic_error("renewal certificate held but the seed died");
    }
    RenewalSample s;
    s.status = RenewalStatus::Renewed;
    s.eta = r;
    s.z = z;
    s.revealed_max = r;
    s.horizon = horizon;
    return s;
  }

  RenewalSample s;
  s.status = RenewalStatus::Censored;
  s.eta = 0;
  s.z = 0;
  s.revealed_max = r;
  s.horizon = horizon;
  return s;
}

RenewalSample sample_renewal(LazyConfiguration& lazy, std::int64_t horizon) {
  return sample_renewal(static_cast<SpeedSource&>(lazy), horizon);
}

OffspringEstimate estimate_offspring_mean(double p, std::int64_t horizon,
                                          std::int64_t reps, std::uint64_t seed,
                                          int threads) {
  if (reps <= 0) throw std::invalid_argument("reps must be positive");

  std::atomic<std::uint64_t> z_sum{0};
  std::atomic<std::uint64_t> z2_sum{0};
  std::atomic<std::uint64_t> censored{0};
  parallel_chunks(reps, 1024, threads, [&](std::int64_t b, std::int64_t e) {
    std::uint64_t zs = 0, z2s = 0, cs = 0;
    for (std::int64_t rep = b; rep < e; ++rep) {
      LazyConfiguration lazy(derive_seed(seed, static_cast<std::uint64_t>(rep)),
                             p);
      const RenewalSample s = sample_renewal(lazy, horizon);
      if (s.status == RenewalStatus::Censored) {
        ++cs;
      } else {
        const auto z = static_cast<std::uint64_t>(s.z);
        zs += z;
        z2s += z * z;
      }
    }
    z_sum += zs;
    z2_sum += z2s;
    censored += cs;
  });

  const auto n = static_cast<double>(reps);
  const double mean = static_cast<double>(z_sum.load()) / n;
  double var = 0.0;
  if (reps > 1) {
    const double m2 = static_cast<double>(z2_sum.load()) / n;
    var = std::max(0.0, m2 - mean * mean) * n / (n - 1.0);
  }
  OffspringEstimate est;
  est.mean_lower = mean;
  est.censor_rate = static_cast<double>(censored.load()) / n;
  est.ci_halfwidth = 1.96 * std::sqrt(var / n);
  return est;
}

GenerationsResult simulate_generations(double p, std::int64_t horizon,
                                       int max_generations, std::uint64_t seed,
                                       std::uint64_t node_cap) {
  if (max_generations < 1) {
    throw std::invalid_argument("max_generations must be >= 1");
  }
  GenerationsResult res;
  res.trace.assign(static_cast<std::size_t>(max_generations) + 1, 0);
  res.trace[0] = 1;

  std::vector<int> pending{0};  // generations of members awaiting expansion
  std::uint64_t samples = 0;
  bool capped = false;
  while (!pending.empty()) {
    const int g = pending.back();
    pending.pop_back();
    if (g >= max_generations) continue;  // counted but not expanded
    if (samples >= node_cap) {
      capped = true;
      break;
    }
    LazyConfiguration lazy(derive_seed(seed, samples++), p);
    const RenewalSample s = sample_renewal(lazy, horizon);
    const std::int64_t z = (s.status == RenewalStatus::Renewed) ? s.z : 0;
    res.trace[static_cast<std::size_t>(g) + 1] += static_cast<std::uint64_t>(z);
    for (std::int64_t k = 0; k < z; ++k) pending.push_back(g + 1);
  }
  res.extinct = !capped && res.trace.back() == 0;
  return res;
}

}  // namespace ba
