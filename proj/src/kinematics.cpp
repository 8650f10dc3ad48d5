#include "ba/kinematics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ba {

namespace {

// Doubled meeting time/position of particles i < j, or no value if they
// never approach.  Exact: the speed gap divides the doubled distance.
struct Meeting {
  std::int64_t time2;
  std::int64_t pos2;
};

inline std::optional<Meeting> meeting(std::span<const Speed> sp, std::int32_t i,
                                      std::int32_t j) {
  const int si = speed_value(sp[i]);
  const int sj = speed_value(sp[j]);
  if (si <= sj) return std::nullopt;  // parallel or diverging
  const std::int64_t gap = j - i;
  const std::int64_t t2 = (si - sj == 2) ? gap : 2 * gap;
  return Meeting{t2, 2 * static_cast<std::int64_t>(i) + si * t2};
}

}  // namespace

Configuration::Configuration(std::vector<Speed> speeds)
    : speeds_(std::move(speeds)) {
  if (speeds_.empty()) {
    throw std::invalid_argument("configuration must be nonempty");
  }
}

void Simulator::push_candidate(std::span<const Speed> sp, std::int32_t i,
                               std::int32_t j) {
  const auto m = meeting(sp, i, j);
  if (!m) return;
  heap_.push_back(Candidate{m->time2, m->pos2, i, j});
  std::push_heap(heap_.begin(), heap_.end(),
                 [](const Candidate& a, const Candidate& b) {
                   return a.time2 > b.time2 ||
                          (a.time2 == b.time2 && a.pos2 > b.pos2);
                 });
}

const SimOutcome& Simulator::run(std::span<const Speed> sp) {
  const auto n = static_cast<std::int32_t>(sp.size());
  if (n == 0) throw std::invalid_argument("configuration must be nonempty");

  out_.xi.resize(sp.size());
  out_.event_of.assign(sp.size(), -1);
  out_.events.clear();
  nxt_.resize(sp.size());
  prv_.resize(sp.size());
  heap_.clear();
  for (std::int32_t i = 0; i < n; ++i) {
    out_.xi[i] = static_cast<std::int8_t>(speed_value(sp[i]));
    nxt_[i] = (i + 1 < n) ? i + 1 : -1;
    prv_[i] = i - 1;
  }
  for (std::int32_t i = 0; i + 1 < n; ++i) push_candidate(sp, i, i + 1);

  const auto cmp = [](const Candidate& a, const Candidate& b) {
    return a.time2 > b.time2 || (a.time2 == b.time2 && a.pos2 > b.pos2);
  };
  const auto alive = [&](std::int32_t i) { return out_.event_of[i] < 0; };

  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), cmp);
    const Candidate c = heap_.back();
    heap_.pop_back();
    // Once adjacent, a pair stays adjacent until one side dies, so liveness
    // of both ends is the full validity test.
    if (!alive(c.i) || !alive(c.j)) continue;

    std::int32_t a = c.i, b = c.j, t = -1;
    // A pair meeting can be one flank of a simultaneous (+1, 0, -1) triple;
    // the third participant is then the inert particle's other neighbour.
    if (sp[c.i] == Speed::PlusOne && sp[c.j] == Speed::Zero) {
      const std::int32_t k = nxt_[c.j];
      if (k >= 0 && sp[k] == Speed::MinusOne) {
        const auto m = meeting(sp, c.j, k);
        if (m && m->time2 == c.time2 && m->pos2 == c.pos2) t = k;
      }
    } else if (sp[c.i] == Speed::Zero && sp[c.j] == Speed::MinusOne) {
      const std::int32_t k = prv_[c.i];
      if (k >= 0 && sp[k] == Speed::PlusOne) {
        const auto m = meeting(sp, k, c.i);
        if (m && m->time2 == c.time2 && m->pos2 == c.pos2) {
          t = b;
          b = a;
          a = k;
        }
      }
    }

    const auto eidx = static_cast<std::int32_t>(out_.events.size());
    CollisionEvent ev;
    ev.time2 = c.time2;
    ev.pos2 = c.pos2;
    ev.idx = {a, b, t};
    out_.events.push_back(ev);

    const std::int32_t last = (t >= 0) ? t : b;
    for (std::int32_t p : {a, b, t}) {
      if (p < 0) continue;
      out_.event_of[p] = eidx;
      out_.xi[p] = 2;
    }
    const std::int32_t left = prv_[a];
    const std::int32_t right = nxt_[last];
    if (left >= 0) nxt_[left] = right;
    if (right >= 0) prv_[right] = left;
    if (left >= 0 && right >= 0) push_candidate(sp, left, right);
  }
  return out_;
}

SimOutcome run_ba(const Configuration& config) {
  Simulator sim;
  return sim.run(config.speeds());
}

const std::vector<std::int8_t>& xi(const SimOutcome& outcome) {
  return outcome.xi;
}

Configuration reflect(const Configuration& config) {
  std::vector<Speed> rev(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) {
    rev[config.size() - 1 - i] =
        static_cast<Speed>(-speed_value(config[i]));
  }
  return Configuration(std::move(rev));
}

std::optional<std::int32_t> destroyer_of(const SimOutcome& outcome,
                                         std::int32_t i) {
  if (i < 0 || i >= static_cast<std::int32_t>(outcome.xi.size())) {
    throw std::invalid_argument("destroyer_of: index out of range");
  }
  const std::int32_t e = outcome.event_of[i];
  if (e < 0) return std::nullopt;
  std::int32_t best = -1;
  for (std::int32_t p : outcome.events[e].idx) {
    if (p >= 0 && p != i) best = std::max(best, p);
  }
  return best;
}

std::vector<Speed> parse_speeds(const std::string& text) {
  std::vector<Speed> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    if (b == std::string::npos) {
      throw std::invalid_argument("empty speed entry in '" + text + "'");
    }
    const std::string s = tok.substr(b, e - b + 1);
    if (s == "-1") {
      out.push_back(Speed::MinusOne);
    } else if (s == "0") {
      out.push_back(Speed::Zero);
    } else if (s == "1" || s == "+1") {
      out.push_back(Speed::PlusOne);
    } else {
      throw std::invalid_argument("bad speed '" + s + "' (want -1, 0 or 1)");
    }
  }
  if (out.empty()) throw std::invalid_argument("no speeds in '" + text + "'");
  return out;
}

std::string format_speeds(std::span<const Speed> speeds) {
  std::string s;
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(speed_value(speeds[i]));
  }
  return s;
}

std::string format_xi(std::span<const std::int8_t> xi_values) {
  std::string s;
  for (std::size_t i = 0; i < xi_values.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(static_cast<int>(xi_values[i]));
  }
  return s;
}

std::string format_half(std::int64_t doubled) {
  std::string s = std::to_string(doubled / 2);
  if (doubled % 2 != 0) {
    if (doubled < 0 && doubled / 2 == 0) s = "-" + s;
    s += ".5";
  }
  return s;
}

}  // namespace ba
