#pragma once

// Exact event-driven resolution of three-speed ballistic annihilation on a
// finite unit-spaced configuration.  Particle i starts at integer position i
// with speed in {-1, 0, +1}; particles annihilate mutually on contact, three
// at a time when a (+1, 0, -1) trio meets in a single point.  Collision times
// and positions on the unit lattice are half-integers, so everything is kept
// doubled in int64 and no floating point enters the kinematics.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ba {

enum class Speed : std::int8_t { MinusOne = -1, Zero = 0, PlusOne = 1 };

constexpr int speed_value(Speed s) { return static_cast<int>(s); }

// Finite speed vector; the index doubles as the initial position.
class Configuration {
 public:
  explicit Configuration(std::vector<Speed> speeds);

  std::size_t size() const { return speeds_.size(); }
  Speed operator[](std::size_t i) const { return speeds_[i]; }
  std::span<const Speed> speeds() const { return speeds_; }

 private:
  std::vector<Speed> speeds_;
};

// One annihilation event.  time2/pos2 are time and position scaled by 2.
// Participants are ascending; idx[2] stays -1 for a pair collision.
struct CollisionEvent {
  std::int64_t time2 = 0;
  std::int64_t pos2 = 0;
  std::array<std::int32_t, 3> idx{-1, -1, -1};

  int size() const { return idx[2] < 0 ? 2 : 3; }
  bool is_triple() const { return size() == 3; }
  bool contains(std::int32_t i) const {
    return idx[0] == i || idx[1] == i || idx[2] == i;
  }
  friend bool operator==(const CollisionEvent&, const CollisionEvent&) = default;
};

// Final state of a run.  xi[i] is the particle's speed if it survives and the
// literal value 2 if it was annihilated.  Events come sorted by (time2, pos2).
// event_of[i] is the index into events of the event that removed particle i,
// or -1 for survivors.
struct SimOutcome {
  std::vector<std::int8_t> xi;
  std::vector<CollisionEvent> events;
  std::vector<std::int32_t> event_of;
};

// Reusable simulation scratch space.  run() resolves one configuration and
// returns a reference to an internally owned outcome, valid until the next
// run().  A Simulator instance is cheap to keep around in hot loops; distinct
// instances never share state, so per-thread instances are safe.
class Simulator {
 public:
  const SimOutcome& run(std::span<const Speed> speeds);

 private:
  struct Candidate {
    std::int64_t time2;
    std::int64_t pos2;
    std::int32_t i;
    std::int32_t j;
  };

  void push_candidate(std::span<const Speed> sp, std::int32_t i, std::int32_t j);

  std::vector<std::int32_t> nxt_;
  std::vector<std::int32_t> prv_;
  std::vector<Candidate> heap_;
  SimOutcome out_;
};

// Runs the full annihilation dynamics until no further collision can occur.
SimOutcome run_ba(const Configuration& config);

// Survivor/annihilation vector of an outcome (speed if alive, 2 if not).
const std::vector<std::int8_t>& xi(const SimOutcome& outcome);

// Spatial mirror: reverses the order and negates every speed.  An involution.
Configuration reflect(const Configuration& config);

// Index of the particle that annihilates particle i, or nullopt if i
// survives.  In a triple collision the destroyer is the larger of the two
// partner indices; for a +1 particle that partner necessarily has speed -1.
std::optional<std::int32_t> destroyer_of(const SimOutcome& outcome,
                                         std::int32_t i);

// Text encodings shared by the CLI and the table files.
std::vector<Speed> parse_speeds(const std::string& text);      // "0,1,-1"
std::string format_speeds(std::span<const Speed> speeds);
std::string format_xi(std::span<const std::int8_t> xi_values);  // "0,2,2,1"
std::string format_half(std::int64_t doubled);                  // 3 -> "1.5"

}  // namespace ba
