#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lockstep/world.hpp"

namespace lockstep {

/// Event t is (t mod n, (t / n) mod r): every pair once per window of n*r.
class RoundRobin final : public Scheduler {
 public:
  RoundRobin(std::size_t n, std::size_t r);
  VisitEvent next(const WorldView& view) override;

 private:
  std::size_t n_, r_;
  std::uint64_t t_ = 0;
};

/// I.i.d. uniform pairs from std::mt19937_64(seed), drawn as value mod n*r.
class SeededRandom final : public Scheduler {
 public:
  SeededRandom(std::size_t n, std::size_t r, std::uint64_t seed);
  VisitEvent next(const WorldView& view) override;

 private:
  std::size_t n_, r_;
  std::mt19937_64 rng_;
};

/// Plays a fixed event list, then continues round-robin.
class ReplayThenRoundRobin final : public Scheduler {
 public:
  ReplayThenRoundRobin(std::vector<VisitEvent> prefix, std::size_t n, std::size_t r);
  VisitEvent next(const WorldView& view) override;

 private:
  std::vector<VisitEvent> prefix_;
  std::size_t at_ = 0;
  RoundRobin tail_;
};

/// The visit order under which two_config_prob_eps declares: each prisoner
/// in turn sweeps all rooms, handing over through room 0.
std::vector<VisitEvent> prob_eps_witness(std::size_t n, std::size_t r);

/// Every window of `window` consecutive events contains every pair.
bool window_fair(const std::vector<VisitEvent>& events, std::size_t n, std::size_t r, std::size_t window);

struct RecurringConfig {
  Config d{};
  /// Passes between two occurrences of the recurring joint state.
  std::uint64_t cycle_length = 0;
  /// Pass index of the first occurrence.
  std::uint64_t first_pass = 0;
};

/// Sends all prisoners, in index order, through a single room that starts in
/// `c`, until the joint state (room, cursors) repeats at a pass boundary.
/// Throws ResourceLimit after `max_passes` passes.
RecurringConfig find_recurring_config(const ProtocolInstance& instance, Config c,
                                      std::uint64_t max_passes = 1'000'000);

/// Single room 0, prisoners in index order.
class SingleRoom final : public Scheduler {
 public:
  explicit SingleRoom(std::size_t n) : n_(n) {}
  VisitEvent next(const WorldView& view) override;

 private:
  std::size_t n_;
  std::uint64_t t_ = 0;
};

/// Passes of all prisoners through a current room; the pointer moves to the
/// next room whenever a pass ends with the current room in `d`.
class PointerPasses final : public Scheduler {
 public:
  PointerPasses(std::size_t n, std::size_t r, Config d) : n_(n), r_(r), d_(d) {}
  VisitEvent next(const WorldView& view) override;
  std::uint64_t advances() const noexcept { return advances_; }

 private:
  std::size_t n_, r_;
  Config d_;
  std::size_t room_ = 0;
  std::uint64_t t_ = 0;
  std::uint64_t advances_ = 0;
};

/// Two schedules no prisoner can tell apart from start (C, D, D, ...): s1
/// keeps everyone in room 0, s2 is valid whenever D keeps recurring.
struct SchedulePair {
  std::vector<Config> start;
  Config c{};
  RecurringConfig recurrence;

  std::unique_ptr<SingleRoom> s1(std::size_t n) const { return std::make_unique<SingleRoom>(n); }
  std::unique_ptr<PointerPasses> s2(std::size_t n) const {
    return std::make_unique<PointerPasses>(n, start.size(), recurrence.d);
  }
};

/// Requires r >= 2 (UnsupportedParameter otherwise).
SchedulePair build_schedule_pair(const ProtocolInstance& instance, Config c = config(0));

/// The instance with its rooms started in `start` instead.
ProtocolInstance with_start(const ProtocolInstance& instance, std::vector<Config> start);

/// The first `declare_step` events of `prefix`, then round-robin.
std::unique_ptr<Scheduler> extend_to_valid(std::vector<VisitEvent> prefix, std::uint64_t declare_step, std::size_t n,
                                           std::size_t r);

/// Per prisoner, the (configuration seen, configuration left) sequence.
using ObservationLogs = std::vector<std::vector<std::pair<std::string, std::string>>>;
ObservationLogs observation_logs(const std::vector<TraceRecord>& trace, std::size_t n);

std::vector<VisitEvent> events_of(const std::vector<TraceRecord>& trace);

}  // namespace lockstep
