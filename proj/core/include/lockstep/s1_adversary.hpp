#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lockstep/cursor_graph.hpp"
#include "lockstep/ownership.hpp"
#include "lockstep/world.hpp"

namespace lockstep {

/// Warden against single-switch (m = 2) protocols with n >= 2, r >= 5 that
/// keeps every configuration from being provably owned by all prisoners.
///
/// By default it extends the visit sequence with the least recently used
/// (prisoner, room) pair, ties to the lowest pair. When one prisoner alone
/// provably owns a two-room configuration, another prisoner is routed through
/// rooms realizing a shortest observation word that forces him to act.
class S1Adversary final : public Scheduler {
 public:
  /// Throws UnsupportedParameter unless m = 2, n >= 2, r >= 5.
  explicit S1Adversary(const ProtocolInstance& instance);

  VisitEvent next(const WorldView& view) override;
  void observe(const WorldView& after, VisitEvent event, const StepResult& result) override;

  const OwnershipTable& table() const noexcept { return table_; }
  std::uint64_t direct_extensions() const noexcept { return direct_.size(); }
  std::uint64_t routed_visits() const noexcept { return routed_; }
  /// First step after which none of the four case conditions held.
  const std::optional<std::string>& invariant_violation() const noexcept { return violation_; }
  /// Steps after which more than one case condition held at once.
  std::uint64_t overlapping_cases() const noexcept { return overlaps_; }

  /// Every n*r consecutive direct extensions span an occurrence of every pair.
  bool fairness_audit() const;

 private:
  bool finished(const WorldState& s, std::size_t p) const;
  std::size_t owners_of_nonempty() const;
  void check_cases(const WorldState& s, std::uint64_t step);

  const ProtocolInstance& inst_;
  std::size_t n_, r_;
  OwnershipTable table_;
  std::vector<CursorGraph> graphs_;
  std::vector<std::int64_t> last_;  // last step of each pair, -1 if never
  std::vector<VisitEvent> events_;
  std::vector<std::uint64_t> direct_;  // indices into events_
  std::vector<VisitEvent> pending_;    // routed visits still to issue, in reverse
  std::uint64_t routed_ = 0;
  std::uint64_t overlaps_ = 0;
  std::optional<std::string> violation_;
};

struct S1Demo {
  Outcome outcome;  // of the adversary's own run, judged on all rooms
  std::uint64_t direct = 0;
  std::uint64_t routed = 0;
  std::optional<std::string> invariant_violation;
  std::uint64_t overlapping_cases = 0;
  bool fair = false;
  /// For a declaration that happened to be correct: a schedule with the same
  /// observed history on which the same declaration is incorrect.
  std::optional<Realization> alternative;
  Outcome alternative_outcome;
  std::vector<TraceRecord> trace;

  /// No declaration, or only declarations refuted by an indistinguishable schedule.
  bool defeated() const;
};

/// Runs the adversary for up to `max_steps` events against `instance`, with
/// the win condition set to every prisoner in every room.
S1Demo run_s1_demo(const ProtocolInstance& instance, std::uint64_t max_steps);

}  // namespace lockstep
