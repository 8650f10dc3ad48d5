#include "ba/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ba/parallel.hpp"
#include "ba/rng.hpp"

namespace ba {
namespace {

constexpr std::int64_t kRepChunk = 4096;

double sigma_units(double mc, double exact, double variance,
                   std::uint64_t reps) {
  const double se = std::sqrt(variance / static_cast<double>(reps));
  if (se > 0.0) return std::abs(mc - exact) / se;
  return mc == exact ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

TableCheckResult mc_check_tables(const CountTables& tables, double p, int n,
                                 std::uint64_t reps, std::uint64_t seed,
                                 int threads) {
  if (n < 2 || n > tables.depth)
    throw std::invalid_argument("n must lie in [2, tables.depth]");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("p must lie in [0,1]");
  if (reps != 0 && reps < 1000)
    throw std::invalid_argument("reps must be 0 or at least 1000");

  TableCheckResult result;
  result.n = n;
  result.p = p;
  result.reps = reps;

  // Exact window moments from the tables: probability, first and second
  // moments of the surviving-inert excess.
  const double q = (1.0 - p) / 2.0;
  double prob = 0.0;
  double ez = 0.0;
  double ez2 = 0.0;
  for (const auto& [key, c] : tables.at(n).an) {
    const auto& [i, z1] = key;
    const double w =
        c.convert_to<double>() * std::pow(p, i) * std::pow(q, 2 * n - 2 - i);
    prob += w;
    ez += w * (z1 - 1);
    ez2 += w * (z1 - 1) * (z1 - 1);
  }
  result.p_an_exact = prob;
  result.ez_exact = ez;

  if (reps == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    result.p_an_mc = result.p_an_sigma = nan;
    result.ez_mc = result.ez_sigma = nan;
    return result;
  }

  const std::size_t len = static_cast<std::size_t>(2 * n);
  std::atomic<std::uint64_t> hits{0};
  std::atomic<std::uint64_t> excess{0};
  parallel_chunks(
      static_cast<std::int64_t>(reps), kRepChunk, threads,
      [&](std::int64_t lo, std::int64_t hi) {
        std::uint64_t local_hits = 0;
        std::uint64_t local_excess = 0;
        std::vector<Speed> window(len);
        window[0] = Speed::Zero;
        window[1] = Speed::PlusOne;
        for (std::int64_t r = lo; r < hi; ++r) {
          const std::uint64_t rs = derive_seed(seed, static_cast<std::uint64_t>(r));
          for (std::size_t k = 2; k < len; ++k)
            window[k] = sample_speed(rs, k, p);
          const Classification cl = classify(Configuration(window));
          if (cl.kind != WindowClass::NotInAn) {
            ++local_hits;
            local_excess += static_cast<std::uint64_t>(cl.z1 - 1);
          }
        }
        hits.fetch_add(local_hits, std::memory_order_relaxed);
        excess.fetch_add(local_excess, std::memory_order_relaxed);
      });

  const double r = static_cast<double>(reps);
  result.p_an_mc = static_cast<double>(hits.load()) / r;
  result.ez_mc = static_cast<double>(excess.load()) / r;
  result.p_an_sigma =
      sigma_units(result.p_an_mc, prob, prob * (1.0 - prob), reps);
  result.ez_sigma = sigma_units(result.ez_mc, ez, ez2 - ez * ez, reps);
  return result;
}

double mc_seed_survival(double p, int window, std::uint64_t reps,
                        std::uint64_t seed, int threads) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (reps == 0) throw std::invalid_argument("reps must be positive");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("p must lie in [0,1]");

  const std::size_t len = static_cast<std::size_t>(window) + 1;
  std::atomic<std::uint64_t> alive{0};
  parallel_chunks(
      static_cast<std::int64_t>(reps), kRepChunk, threads,
      [&](std::int64_t lo, std::int64_t hi) {
        std::uint64_t local_alive = 0;
        std::vector<Speed> cfg(len);
        cfg[0] = Speed::Zero;
        Simulator sim;
        for (std::int64_t r = lo; r < hi; ++r) {
          const std::uint64_t rs = derive_seed(seed, static_cast<std::uint64_t>(r));
          for (std::size_t k = 1; k < len; ++k) cfg[k] = sample_speed(rs, k, p);
          if (sim.run(cfg).xi[0] == 0) ++local_alive;
        }
        alive.fetch_add(local_alive, std::memory_order_relaxed);
      });
  return static_cast<double>(alive.load()) / static_cast<double>(reps);
}

}  // namespace ba
