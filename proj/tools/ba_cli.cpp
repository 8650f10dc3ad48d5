// Command-line front end.  Machine-readable results (JSON or CSV) go to
// stdout, human-readable summaries and progress to stderr.  Exit codes:
// 0 success, 1 usage error, 2 data or file error, 3 internal error.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ba/bounds.hpp"
#include "ba/enumeration.hpp"
#include "ba/kinematics.hpp"
#include "ba/montecarlo.hpp"
#include "ba/renewal.hpp"

namespace {

using nlohmann::ordered_json;

// Accepts "a/b", integers, and decimal literals, exactly.
// Digits-only decimal integer.  Leading zeros are stripped first: the
// multiprecision string constructor would read them as an octal prefix.
ba::Count parse_decimal_digits(std::string digits) {
  if (digits.empty() ||
      digits.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("");
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  return ba::Count(digits);
}

ba::Rational parse_rational(const std::string& text) {
  try {
    std::string t = text;
    bool neg = false;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
      neg = t[0] == '-';
      t.erase(0, 1);
    }
    ba::Rational r;
    if (const auto slash = t.find('/'); slash != std::string::npos) {
      const ba::Count num = parse_decimal_digits(t.substr(0, slash));
      const ba::Count den = parse_decimal_digits(t.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("");
      r = ba::Rational(num, den);
    } else {
      std::string digits = t;
      std::size_t frac = 0;
      if (const auto dot = t.find('.'); dot != std::string::npos) {
        digits = t.substr(0, dot) + t.substr(dot + 1);
        frac = t.size() - dot - 1;
      }
      ba::Count den = 1;
      for (std::size_t k = 0; k < frac; ++k) den *= 10;
      r = ba::Rational(parse_decimal_digits(digits), den);
    }
    return neg ? -r : r;
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational number: " + text);
  }
}

double parse_double(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: " + text);
  }
}

// A bare file name that does not exist locally is also looked up under
// $BA_TABLE_DIR.
std::string resolve_table_path(const std::string& given) {
  if (!std::filesystem::exists(given) &&
      given.find('/') == std::string::npos) {
    if (const char* dir = std::getenv("BA_TABLE_DIR")) {
      const std::string alt = std::string(dir) + "/" + given;
      if (std::filesystem::exists(alt)) return alt;
    }
  }
  return given;
}

ba::BoundLevel to_level(int level) { return static_cast<ba::BoundLevel>(level); }

struct SweepRange {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
};

SweepRange parse_sweep(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw std::invalid_argument("sweep must be p0:p1:steps");
  SweepRange r;
  r.lo = parse_double(text.substr(0, c1));
  r.hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
  try {
    r.steps = std::stoi(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("sweep must be p0:p1:steps");
  }
  if (!(0.0 < r.lo && r.lo < r.hi && r.hi < 1.0) || r.steps < 2)
    throw std::invalid_argument(
        "sweep needs 0 < p0 < p1 < 1 and at least 2 steps");
  return r;
}

void emit(const ordered_json& j) { std::cout << j.dump() << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-speed ballistic annihilation: exact simulation, window "
               "census, offspring bounds"};
  app.require_subcommand(1);

  // simulate
  std::string sim_speeds;
  auto* sim = app.add_subcommand(
      "simulate", "resolve one configuration and print its collision events");
  sim->add_option("--speeds", sim_speeds,
                  "comma-separated speeds, e.g. 0,1,0,-1")
      ->required();
  sim->callback([&] {
    const ba::Configuration cfg(ba::parse_speeds(sim_speeds));
    const ba::SimOutcome out = ba::run_ba(cfg);
    for (const auto& ev : out.events) {
      std::cout << "t=" << ba::format_half(ev.time2)
                << " x=" << ba::format_half(ev.pos2) << " {" << ev.idx[0]
                << ',' << ev.idx[1];
      if (ev.is_triple()) std::cout << ',' << ev.idx[2];
      std::cout << "}\n";
    }
    std::cout << "xi " << ba::format_xi(out.xi) << '\n';
    std::size_t survivors = 0;
    for (const auto x : out.xi)
      if (x != 2) ++survivors;
    std::cerr << out.events.size() << " event(s), " << survivors
              << " survivor(s)\n";
  });

  // enumerate
  int enum_depth = 0;
  int enum_threads = 0;
  std::string enum_out;
  auto* enu = app.add_subcommand(
      "enumerate", "build the window census tables up to a given depth");
  enu->add_option("--depth", enum_depth, "largest destroyer index n")
      ->required()
      ->check(CLI::Range(2, 40));
  enu->add_option("--threads", enum_threads,
                  "worker threads (0 = all logical cores)");
  enu->add_option("--out", enum_out, "output table file (JSON)")->required();
  enu->callback([&] {
    const ba::CountTables tables = ba::enumerate_tables(
        enum_depth, enum_threads, [](int n, std::uint64_t nodes) {
          std::cerr << "n=" << n << " nodes=" << nodes << '\n';
        });
    ba::save_tables(tables, enum_out);
    std::cerr << "wrote depth-" << enum_depth << " tables to " << enum_out
              << " in " << std::fixed << std::setprecision(1)
              << tables.meta.walltime_s << " s\n";
  });

  // bound
  int bound_level = 0;
  std::string bound_p;
  std::string bound_sweep;
  std::string bound_tables;
  bool bound_exact_flag = false;
  auto* bnd = app.add_subcommand(
      "bound", "evaluate an offspring-mean lower bound at p or over a sweep");
  bnd->add_option("--level", bound_level, "bound level 0..3")
      ->required()
      ->check(CLI::Range(0, 3));
  bnd->add_option("--p", bound_p, "density of inert particles");
  bnd->add_option("--sweep", bound_sweep, "p0:p1:steps CSV sweep");
  bnd->add_option("--tables", bound_tables,
                  "count table file (needed for levels 2 and 3)");
  bnd->add_flag("--exact", bound_exact_flag,
                "evaluate in exact rational arithmetic");
  bnd->callback([&] {
    std::optional<ba::CountTables> tables;
    if (!bound_tables.empty())
      tables = ba::load_tables(resolve_table_path(bound_tables));
    const ba::CountTables* tp = tables ? &*tables : nullptr;
    const int depth = tables ? tables->depth : 0;
    const auto level = to_level(bound_level);
    if (!bound_sweep.empty()) {
      const SweepRange r = parse_sweep(bound_sweep);
      std::cout << "p,level,depth,value\n" << std::setprecision(12);
      for (int k = 0; k < r.steps; ++k) {
        const double pk = r.lo + k * (r.hi - r.lo) / (r.steps - 1);
        std::cout << pk << ',' << bound_level << ',' << depth << ','
                  << ba::bound(tp, pk, level) << '\n';
      }
      return;
    }
    if (bound_p.empty())
      throw std::invalid_argument("bound needs --p or --sweep");
    const double pd = bound_exact_flag
                          ? parse_rational(bound_p).convert_to<double>()
                          : parse_double(bound_p);
    ordered_json j{{"p", pd}, {"level", bound_level}, {"depth", depth}};
    if (bound_exact_flag) {
      const ba::Rational v =
          ba::bound_exact(tp, parse_rational(bound_p), level);
      j["value"] = v.convert_to<double>();
      j["value_exact"] = v.str();
    } else {
      j["value"] = ba::bound(tp, pd, level);
    }
    emit(j);
    std::cerr << "bound L" << bound_level << "(p=" << pd
              << ") = " << j["value"].get<double>() << '\n';
  });

  // threshold
  int thr_level = 0;
  double thr_tol = 1e-7;
  std::string thr_tables;
  auto* thr = app.add_subcommand(
      "threshold", "find the p where a bound level first exceeds 1");
  thr->add_option("--level", thr_level, "bound level 0..3")
      ->required()
      ->check(CLI::Range(0, 3));
  thr->add_option("--tol", thr_tol, "bisection tolerance")
      ->check(CLI::PositiveNumber);
  thr->add_option("--tables", thr_tables,
                  "count table file (needed for levels 2 and 3)");
  thr->callback([&] {
    std::optional<ba::CountTables> tables;
    if (!thr_tables.empty())
      tables = ba::load_tables(resolve_table_path(thr_tables));
    const ba::CountTables* tp = tables ? &*tables : nullptr;
    const double p_star = ba::find_threshold(tp, to_level(thr_level), thr_tol);
    emit(ordered_json{{"level", thr_level},
                      {"depth", tables ? tables->depth : 0},
                      {"p_star", p_star},
                      {"tol", thr_tol}});
    std::cerr << "threshold L" << thr_level << " = " << std::setprecision(8)
              << p_star << '\n';
  });

  // gamma-tail
  std::string gt_p;
  std::string gt_tables;
  bool gt_exact = false;
  auto* gt = app.add_subcommand(
      "gamma-tail",
      "probability that the first +1 is destroyed within the table depth");
  gt->add_option("--p", gt_p, "density of inert particles")->required();
  gt->add_option("--tables", gt_tables, "count table file")->required();
  gt->add_flag("--exact", gt_exact, "evaluate in exact rational arithmetic");
  gt->callback([&] {
    const ba::CountTables tables =
        ba::load_tables(resolve_table_path(gt_tables));
    const double pd = gt_exact ? parse_rational(gt_p).convert_to<double>()
                               : parse_double(gt_p);
    if (!(pd > 0.0 && pd < 1.0))
      throw std::invalid_argument("p must lie in (0,1)");
    ordered_json j{{"p", pd}, {"depth", tables.depth}};
    if (gt_exact) {
      const ba::Rational v = ba::gamma_tail_exact(tables, parse_rational(gt_p));
      j["value"] = v.convert_to<double>();
      j["value_exact"] = v.str();
    } else {
      j["value"] = ba::gamma_tail(tables, pd);
    }
    emit(j);
    std::cerr << "gamma tail at p=" << pd << " is "
              << j["value"].get<double>() << '\n';
  });

  // heuristic
  auto* heu = app.add_subcommand(
      "heuristic", "density-balance estimate of the critical p");
  heu->callback([&] {
    const double pf = ba::heuristic_pc();
    const double pl = ba::heuristic_pc_literal();
    emit(ordered_json{{"p_fraction", pf}, {"p_literal", pl}});
    std::cerr << std::setprecision(6) << "balance root p = " << pf
              << " (fraction w/(w+z)=1/4), " << pl << " (literal w=z/4)\n";
  });

  // offspring
  double off_p = 0.0;
  std::int64_t off_horizon = 10000;
  std::int64_t off_reps = 0;
  std::uint64_t off_seed = 0;
  int off_threads = 0;
  auto* off = app.add_subcommand(
      "offspring", "estimate the mean offspring count of the seed");
  off->add_option("--p", off_p, "density of inert particles")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  off->add_option("--horizon", off_horizon, "censoring horizon")
      ->check(CLI::PositiveNumber);
  off->add_option("--reps", off_reps, "number of samples")
      ->required()
      ->check(CLI::PositiveNumber);
  off->add_option("--seed", off_seed, "RNG seed")->required();
  off->add_option("--threads", off_threads,
                  "worker threads (0 = all logical cores)");
  off->callback([&] {
    const ba::OffspringEstimate est = ba::estimate_offspring_mean(
        off_p, off_horizon, off_reps, off_seed, off_threads);
    emit(ordered_json{{"p", off_p},
                      {"horizon", off_horizon},
                      {"reps", off_reps},
                      {"seed", off_seed},
                      {"mean_lower", est.mean_lower},
                      {"censor_rate", est.censor_rate},
                      {"ci_halfwidth", est.ci_halfwidth}});
    std::cerr << "mean offspring >= " << est.mean_lower << " +- "
              << est.ci_halfwidth << " (censored " << est.censor_rate << ")\n";
  });

  // generations
  double gen_p = 0.0;
  std::int64_t gen_horizon = 10000;
  int gen_max = 20;
  std::uint64_t gen_seed = 0;
  std::uint64_t gen_cap = 10'000'000;
  auto* gen = app.add_subcommand(
      "generations", "expand the branching process generation by generation");
  gen->add_option("--p", gen_p, "density of inert particles")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--horizon", gen_horizon, "censoring horizon per sample")
      ->check(CLI::PositiveNumber);
  gen->add_option("--max-gen", gen_max, "generations to expand")
      ->check(CLI::Range(1, 64));
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("--node-cap", gen_cap, "abort after this many samples");
  gen->callback([&] {
    const ba::GenerationsResult res = ba::simulate_generations(
        gen_p, gen_horizon, gen_max, gen_seed, gen_cap);
    emit(ordered_json{{"p", gen_p},
                      {"horizon", gen_horizon},
                      {"max_generations", gen_max},
                      {"seed", gen_seed},
                      {"extinct", res.extinct},
                      {"trace", res.trace}});
    std::cerr << (res.extinct ? "extinct" : "alive or capped") << " after "
              << res.trace.size() - 1 << " generation(s)\n";
  });

  // mc-tables
  std::string mct_tables;
  double mct_p = 0.0;
  int mct_n = 2;
  std::uint64_t mct_reps = 0;
  std::uint64_t mct_seed = 0;
  int mct_threads = 0;
  auto* mct = app.add_subcommand(
      "mc-tables", "sample windows and compare against the exact census");
  mct->add_option("--tables", mct_tables, "count table file")->required();
  mct->add_option("--p", mct_p, "density of inert particles")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  mct->add_option("--n", mct_n, "destroyer index to check")->required();
  mct->add_option("--reps", mct_reps, "samples (0 = exact values only)");
  mct->add_option("--seed", mct_seed, "RNG seed")->required();
  mct->add_option("--threads", mct_threads,
                  "worker threads (0 = all logical cores)");
  mct->callback([&] {
    const ba::CountTables tables =
        ba::load_tables(resolve_table_path(mct_tables));
    const ba::TableCheckResult res =
        ba::mc_check_tables(tables, mct_p, mct_n, mct_reps, mct_seed,
                            mct_threads);
    emit(ordered_json{{"n", res.n},
                      {"p", res.p},
                      {"reps", res.reps},
                      {"p_an_mc", res.p_an_mc},
                      {"p_an_exact", res.p_an_exact},
                      {"p_an_sigma", res.p_an_sigma},
                      {"ez_mc", res.ez_mc},
                      {"ez_exact", res.ez_exact},
                      {"ez_sigma", res.ez_sigma}});
    std::cerr << "P discrepancy " << res.p_an_sigma << " se, E[z-1] discrepancy "
              << res.ez_sigma << " se\n";
  });

  // mc-survival
  double mcs_p = 0.0;
  int mcs_window = 100;
  std::uint64_t mcs_reps = 0;
  std::uint64_t mcs_seed = 0;
  int mcs_threads = 0;
  auto* mcs = app.add_subcommand(
      "mc-survival", "fraction of sampled windows in which the seed survives");
  mcs->add_option("--p", mcs_p, "density of inert particles")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  mcs->add_option("--window", mcs_window, "number of sampled speeds")
      ->check(CLI::PositiveNumber);
  mcs->add_option("--reps", mcs_reps, "number of samples")
      ->required()
      ->check(CLI::PositiveNumber);
  mcs->add_option("--seed", mcs_seed, "RNG seed")->required();
  mcs->add_option("--threads", mcs_threads,
                  "worker threads (0 = all logical cores)");
  mcs->callback([&] {
    const double frac =
        ba::mc_seed_survival(mcs_p, mcs_window, mcs_reps, mcs_seed,
                             mcs_threads);
    emit(ordered_json{{"p", mcs_p},
                      {"window", mcs_window},
                      {"reps", mcs_reps},
                      {"seed", mcs_seed},
                      {"survival", frac}});
    std::cerr << "seed survival fraction " << frac << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ba::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
