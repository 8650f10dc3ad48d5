#include "ba/enumeration.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string_view>

#include "json.hpp"

#include "ba/parallel.hpp"

namespace ba {
namespace {

constexpr Speed kDigitSpeed[3] = {Speed::MinusOne, Speed::Zero, Speed::PlusOne};
constexpr std::int64_t kSweepChunk = 4096;

std::int64_t pow3(int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r *= 3;
  return r;
}

// Base-3 odometer over the free coordinates.  Digit values 0/1/2 stand for
// speeds -1/0/+1; zeros tracks how many digits are 1 so the inert count is
// available without rescanning.
struct Odometer {
  std::vector<int> digit;
  int zeros = 0;

  void reset(std::int64_t v, int k) {
    digit.assign(static_cast<std::size_t>(k), 0);
    zeros = 0;
    for (auto& d : digit) {
      d = static_cast<int>(v % 3);
      v /= 3;
      if (d == 1) ++zeros;
    }
  }

  void next() {
    for (auto& d : digit) {
      if (d == 1) --zeros;
      d = (d + 1) % 3;
      if (d == 1) ++zeros;
      if (d != 0) return;
    }
  }
};

// Sweeps every assignment of free_count speeds into
// cfg[free_off .. free_off + free_count), runs each configuration, and calls
// visit(outcome, inert_count, partial).  Partials are per-chunk uint64 slot
// arrays merged under a mutex; chunk boundaries are fixed by kSweepChunk
// alone, so totals are identical for every thread count.  Every slot total is
// bounded by 3^free_count, far below uint64 overflow at any feasible depth.
template <typename Visit>
std::vector<std::uint64_t> sweep_counts(const std::vector<Speed>& shape,
                                        int free_off, int free_count,
                                        std::size_t slots, int threads,
                                        Visit visit) {
  std::vector<std::uint64_t> totals(slots, 0);
  std::mutex merge_mu;
  parallel_chunks(pow3(free_count), kSweepChunk, threads,
                  [&](std::int64_t lo, std::int64_t hi) {
                    std::vector<std::uint64_t> part(slots, 0);
                    std::vector<Speed> cfg = shape;
                    Simulator sim;
                    Odometer od;
                    od.reset(lo, free_count);
                    for (std::int64_t v = lo; v < hi; ++v) {
                      for (int d = 0; d < free_count; ++d) {
                        cfg[static_cast<std::size_t>(free_off + d)] =
                            kDigitSpeed[od.digit[static_cast<std::size_t>(d)]];
                      }
                      visit(sim.run(cfg), od.zeros, part.data());
                      od.next();
                    }
                    const std::scoped_lock lock(merge_mu);
                    for (std::size_t s = 0; s < slots; ++s) totals[s] += part[s];
                  });
  return totals;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic serialization of everything the checksum protects: depth and
// the sorted count entries.  Generator and timing metadata stay outside on
// purpose, so regenerated tables with identical counts hash identically.
std::string canonical_payload(const CountTables& t) {
  std::ostringstream os;
  os << "v1;depth=" << t.depth;
  for (int n = 2; n <= t.depth; ++n) {
    const auto& per = t.at(n);
    os << ";n=" << n;
    for (const auto& [key, c] : per.an)
      os << ";a," << key.first << ',' << key.second << ',' << c.str();
    for (const auto& [i, c] : per.aprime) os << ";p," << i << ',' << c.str();
    for (const auto& [i, c] : per.gamma_minus)
      os << ";g," << i << ',' << c.str();
  }
  return os.str();
}

Count parse_count(const std::string& text, const std::string& path) {
  // Canonical decimal only.  A leading zero is rejected rather than parsed:
  // the multiprecision string constructor would treat it as an octal prefix
  // and load a silently different count.
  const bool canonical =
      !text.empty() && text.find_first_not_of("0123456789") == std::string::npos &&
      (text == "0" || text[0] != '0');
  if (!canonical)
    throw DataError("malformed count \"" + text + "\" in " + path);
  return Count(text);
}

}  // namespace

Classification classify(const Configuration& window) {
  const auto sp = window.speeds();
  if (sp.size() < 4 || sp.size() % 2 != 0)
    throw std::invalid_argument("window length must be an even number >= 4");
  if (sp[0] != Speed::Zero || sp[1] != Speed::PlusOne)
    throw std::invalid_argument("window must start with speeds 0,1");
  const int n = static_cast<int>(sp.size() / 2);

  const SimOutcome out = run_ba(window);
  Classification result;
  // A pair collision of particle 1 with an inert destroyer at index n.  A
  // triple can never qualify: its destroyer is the -1 on the right.
  const auto d = destroyer_of(out, 1);
  if (!d || *d != n || sp[static_cast<std::size_t>(n)] != Speed::Zero)
    return result;

  int actives = 0;
  std::size_t last_active = 0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    if (out.xi[i] == 0) ++result.z1;
    if (out.xi[i] == -1 || out.xi[i] == 1) {
      ++actives;
      last_active = i;
    }
  }
  const bool lone_plus_at_end =
      actives == 1 && last_active == sp.size() - 1 && out.xi.back() == 1;
  result.kind = lone_plus_at_end ? WindowClass::InAnPrime : WindowClass::InAn;
  return result;
}

CountTables enumerate_tables(int depth, int threads,
                             const EnumerateProgress& progress) {
  if (depth < 2) throw std::invalid_argument("depth must be at least 2");
  const auto start = std::chrono::steady_clock::now();

  CountTables tables;
  tables.depth = depth;
  tables.per_n.resize(static_cast<std::size_t>(depth - 1));

  for (int n = 2; n <= depth; ++n) {
    // Seed-side block (0, +1, interior).  Accepted when the interior wipes
    // itself out and both the seed and the +1 survive untouched: that is
    // exactly when the +1 goes on to reach index n unharmed.  Slot = number
    // of inert interior entries.
    std::vector<Speed> lshape(static_cast<std::size_t>(n), Speed::Zero);
    lshape[1] = Speed::PlusOne;
    const auto left = sweep_counts(
        lshape, 2, n - 2, static_cast<std::size_t>(n - 1), threads,
        [n](const SimOutcome& out, int zeros, std::uint64_t* part) {
          if (out.xi[0] != 0 || out.xi[1] != 1) return;
          for (std::size_t i = 2; i < static_cast<std::size_t>(n); ++i)
            if (out.xi[i] != 2) return;
          ++part[zeros];
        });

    // Far-side block run in isolation.  A surviving -1 would cross back and
    // reach the destroyer at index n no later than the +1 does (from index
    // m it needs time m - n <= n - 1), so those blocks are rejected; the
    // rest never touch anything left of their own span.  Slots: [I*n + z]
    // keyed by inert entries and inert survivors, and [n*n + I] for blocks
    // whose lone active survivor is a +1 at the last index.
    const int blk = n - 1;
    const std::vector<Speed> rshape(static_cast<std::size_t>(blk), Speed::Zero);
    const std::size_t rslots = static_cast<std::size_t>(n * n + n);
    const auto right = sweep_counts(
        rshape, 0, blk, rslots, threads,
        [n, blk](const SimOutcome& out, int zeros, std::uint64_t* part) {
          int z = 0;
          int plus = 0;
          for (int i = 0; i < blk; ++i) {
            const auto x = out.xi[static_cast<std::size_t>(i)];
            if (x == -1) return;
            if (x == 0) ++z;
            if (x == 1) ++plus;
          }
          ++part[zeros * n + z];
          if (plus == 1 && out.xi[static_cast<std::size_t>(blk - 1)] == 1)
            ++part[n * n + zeros];
        });

    // Destroyer window (0, +1, interior, -1): interiors for which the
    // trailing -1 is what removes the +1, triple collisions included.
    std::vector<Speed> gshape(static_cast<std::size_t>(n + 1), Speed::Zero);
    gshape[1] = Speed::PlusOne;
    gshape[static_cast<std::size_t>(n)] = Speed::MinusOne;
    const auto gm = sweep_counts(
        gshape, 2, n - 2, static_cast<std::size_t>(n - 1), threads,
        [n](const SimOutcome& out, int zeros, std::uint64_t* part) {
          const auto d = destroyer_of(out, 1);
          if (d && *d == n) ++part[zeros];
        });

    // Combine the independent sides.  Window inert count I adds one for the
    // destroyer itself; window survivor count z1 adds one for the seed.
    auto& per = tables.at(n);
    for (int il = 0; il <= n - 2; ++il) {
      const std::uint64_t lc = left[static_cast<std::size_t>(il)];
      if (lc == 0) continue;
      for (int ir = 0; ir <= n - 1; ++ir) {
        for (int z = 0; z <= n - 1; ++z) {
          const std::uint64_t rc = right[static_cast<std::size_t>(ir * n + z)];
          if (rc == 0) continue;
          per.an[{il + 1 + ir, z + 1}] += Count(lc) * rc;
        }
        const std::uint64_t pc = right[static_cast<std::size_t>(n * n + ir)];
        if (pc != 0) per.aprime[il + 1 + ir] += Count(lc) * pc;
      }
    }
    for (int i = 0; i <= n - 2; ++i) {
      const std::uint64_t gc = gm[static_cast<std::size_t>(i)];
      if (gc != 0) per.gamma_minus[i] = Count(gc);
    }

    if (progress)
      progress(n, static_cast<std::uint64_t>(2 * pow3(n - 2) + pow3(n - 1)));
  }

  const auto stop = std::chrono::steady_clock::now();
  tables.meta.generator = "ba enumerate";
  tables.meta.walltime_s = std::chrono::duration<double>(stop - start).count();
  tables.meta.checksum = tables_checksum(tables);
  return tables;
}

std::string tables_checksum(const CountTables& tables) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(canonical_payload(tables))));
  return std::string("fnv1a64:") + hex;
}

void save_tables(const CountTables& tables, const std::string& path) {
  nlohmann::json root;
  root["version"] = 1;
  root["depth"] = tables.depth;
  root["meta"] = {{"generator", tables.meta.generator},
                  {"walltime_s", tables.meta.walltime_s}};
  nlohmann::json list = nlohmann::json::array();
  for (int n = 2; n <= tables.depth; ++n) {
    const auto& per = tables.at(n);
    nlohmann::json entry;
    entry["n"] = n;
    entry["an"] = nlohmann::json::array();
    for (const auto& [key, c] : per.an)
      entry["an"].push_back(
          {{"i", key.first}, {"z1", key.second}, {"count", c.str()}});
    entry["aprime"] = nlohmann::json::array();
    for (const auto& [i, c] : per.aprime)
      entry["aprime"].push_back({{"i", i}, {"count", c.str()}});
    entry["gamma_minus"] = nlohmann::json::array();
    for (const auto& [i, c] : per.gamma_minus)
      entry["gamma_minus"].push_back({{"i", i}, {"count", c.str()}});
    list.push_back(std::move(entry));
  }
  root["tables"] = std::move(list);
  root["checksum"] = tables_checksum(tables);

  std::ofstream file(path);
  if (!file) throw DataError("cannot open table file for writing: " + path);
  file << root.dump(1) << '\n';
  file.flush();
  if (!file) throw DataError("failed while writing table file: " + path);
}

CountTables load_tables(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw DataError("cannot open table file: " + path);
  nlohmann::json root;
  try {
    file >> root;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("table file is not valid JSON: " + path + ": " + e.what());
  }

  try {
    if (!root.is_object() || root.at("version").get<int>() != 1)
      throw DataError("unsupported table file version: " + path);
    CountTables tables;
    tables.depth = root.at("depth").get<int>();
    if (tables.depth < 2)
      throw DataError("table depth out of range: " + path);
    tables.per_n.resize(static_cast<std::size_t>(tables.depth - 1));

    std::vector<bool> seen(static_cast<std::size_t>(tables.depth) + 1, false);
    for (const auto& entry : root.at("tables")) {
      const int n = entry.at("n").get<int>();
      if (n < 2 || n > tables.depth || seen[static_cast<std::size_t>(n)])
        throw DataError("bad or repeated table index n in " + path);
      seen[static_cast<std::size_t>(n)] = true;
      auto& per = tables.at(n);
      for (const auto& e : entry.at("an")) {
        const auto key =
            std::make_pair(e.at("i").get<int>(), e.at("z1").get<int>());
        const auto count = parse_count(e.at("count").get<std::string>(), path);
        if (!per.an.emplace(key, count).second)
          throw DataError("duplicate count entry in " + path);
      }
      for (const auto& e : entry.at("aprime")) {
        const auto count = parse_count(e.at("count").get<std::string>(), path);
        if (!per.aprime.emplace(e.at("i").get<int>(), count).second)
          throw DataError("duplicate count entry in " + path);
      }
      for (const auto& e : entry.at("gamma_minus")) {
        const auto count = parse_count(e.at("count").get<std::string>(), path);
        if (!per.gamma_minus.emplace(e.at("i").get<int>(), count).second)
          throw DataError("duplicate count entry in " + path);
      }
    }
    for (int n = 2; n <= tables.depth; ++n) {
      if (!seen[static_cast<std::size_t>(n)])
        throw DataError("missing table for n=" + std::to_string(n) + " in " +
                        path);
    }

    if (const auto it = root.find("meta"); it != root.end() && it->is_object()) {
      tables.meta.generator = it->value("generator", std::string());
      tables.meta.walltime_s = it->value("walltime_s", 0.0);
    }

    const std::string expect = tables_checksum(tables);
    if (root.at("checksum").get<std::string>() != expect)
      throw DataError("table checksum mismatch: " + path);
    tables.meta.checksum = expect;
    return tables;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed table file " + path + ": " + e.what());
  }
}

double gamma_tail(const CountTables& tables, double p) {
  const double q = (1.0 - p) / 2.0;
  double total = 0.0;
  for (int n = 2; n <= tables.depth; ++n) {
    const auto& per = tables.at(n);
    for (const auto& [i, c] : per.gamma_minus)
      total += c.convert_to<double>() * std::pow(p, i) * std::pow(q, n - 1 - i);
    for (const auto& [key, c] : per.an)
      total += c.convert_to<double>() * std::pow(p, key.first) *
               std::pow(q, 2 * n - 2 - key.first);
  }
  return total;
}

Rational gamma_tail_exact(const CountTables& tables, const Rational& p) {
  const Rational q = (1 - p) / 2;
  Rational total = 0;
  for (int n = 2; n <= tables.depth; ++n) {
    const auto& per = tables.at(n);
    for (const auto& [i, c] : per.gamma_minus)
      total += Rational(c) * rat_pow(p, i) * rat_pow(q, n - 1 - i);
    for (const auto& [key, c] : per.an)
      total += Rational(c) * rat_pow(p, key.first) *
               rat_pow(q, 2 * n - 2 - key.first);
  }
  return total;
}

}  // namespace ba
