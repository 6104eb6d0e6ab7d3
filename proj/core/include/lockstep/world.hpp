#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lockstep/protocol.hpp"

namespace lockstep {

struct VisitEvent {
  std::size_t prisoner = 0;
  std::size_t room = 0;

  friend bool operator==(const VisitEvent&, const VisitEvent&) = default;
};

/// Joint state of rooms and prisoners. `visits` is row-major prisoner x room.
struct WorldState {
  std::vector<Config> rooms;
  std::vector<PrisonerState> prisoners;
  std::vector<std::uint32_t> visits;

  std::size_t n() const noexcept { return prisoners.size(); }
  std::size_t r() const noexcept { return rooms.size(); }
  std::uint32_t visit_count(std::size_t p, std::size_t room) const { return visits[p * r() + room]; }
  bool any_declared() const noexcept;
  bool all_declared() const noexcept;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

WorldState initial_state(const ProtocolInstance& instance);

/// The declaration requirement of `win` holds in `state`.
bool win_satisfied(const WinCondition& win, const WorldState& state);
/// Prisoner `p` has been in every room at least once.
bool row_full(const WorldState& state, std::size_t p);

struct StepResult {
  Config before{};
  VisitOutcome outcome;
  /// This visit produced a declaration, judged against the visit matrix that
  /// already includes the visit itself.
  bool declaration = false;
  bool correct = false;
};

/// Applies one visit in place. Visit counters saturate at `visit_cap` when it
/// is non-zero.
StepResult apply_visit(const ProtocolInstance& instance, WorldState& state, VisitEvent event,
                       std::uint32_t visit_cap = 0);

struct TraceRecord {
  std::uint64_t step = 0;  // 1-based
  std::size_t prisoner = 0;
  std::size_t room = 0;
  std::string config_before;
  std::string config_after;
  bool fired = false;
  bool declared = false;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

TraceRecord make_record(const ProtocolInstance& instance, std::uint64_t step, VisitEvent event,
                        const StepResult& result);

/// Replays `events` from the instance's start state.
std::vector<TraceRecord> replay(const ProtocolInstance& instance, const std::vector<VisitEvent>& events);

struct Outcome {
  enum class Kind { DeclaredCorrect, DeclaredIncorrect, StepLimit };
  Kind kind = Kind::StepLimit;
  std::uint64_t step = 0;
  std::size_t prisoner = 0;  // declarer for DeclaredIncorrect

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

std::string to_string(const Outcome& o);

/// Everything a warden may look at before choosing the next visit.
struct WorldView {
  const ProtocolInstance& instance;
  const WorldState& state;
  std::uint64_t step;  // events applied so far
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual VisitEvent next(const WorldView& view) = 0;
  /// Called after the chosen event has been applied.
  virtual void observe(const WorldView& /*after*/, VisitEvent /*event*/, const StepResult& /*result*/) {}
};

class Monitor;

struct RunResult {
  Outcome outcome;
  std::vector<TraceRecord> trace;
  WorldState final_state;
  /// First monitor violation, if any: "<id>: <message>" at `violation_step`.
  std::string violation;
  std::uint64_t violation_step = 0;
};

struct RunOptions {
  std::uint64_t max_steps = 10000;
  bool record_trace = true;
  std::vector<Monitor*> monitors;
};

/// Drives `scheduler` against `instance` until a declaration resolves the run
/// (all prisoners declaring, for AllMustDeclare) or `max_steps` events.
RunResult run(const ProtocolInstance& instance, Scheduler& scheduler, const RunOptions& options);

}  // namespace lockstep
