#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lockstep/program.hpp"

namespace lockstep {

struct CursorEdge {
  Config observed{};
  std::uint32_t target = 0;
  Config new_config{};
  bool fired = false;
  bool declared = false;

  /// Changes the room or declares.
  bool acts() const noexcept { return declared || new_config != observed; }
};

/// Every cursor state a single prisoner can reach, whatever configurations the
/// warden shows him, with one edge per observable configuration.
///
/// Negative oscillate counters are folded into zero: from any net <= 0 the same
/// set of instructions stays reachable, so the fold keeps the graph finite
/// without changing which actions remain possible.
class CursorGraph {
 public:
  explicit CursorGraph(const Program& program);
  CursorGraph(const Program& program, PrisonerState root);

  std::size_t size() const noexcept { return nodes_.size(); }
  const PrisonerState& node(std::uint32_t id) const { return nodes_[id]; }
  std::span<const CursorEdge> edges(std::uint32_t id) const;
  std::optional<std::uint32_t> find(const PrisonerState& state) const;

  /// Some node reachable from `id` (including itself) has an acting edge.
  bool can_act(std::uint32_t id) const { return can_act_[id] != 0; }

  /// Shortest sequence of observed configurations, drawn from `allowed`, that
  /// leads the prisoner from node `from` to a visit that changes the room or
  /// declares (the last letter). Earlier letters never act.
  std::optional<std::vector<Config>> forcing_word(std::uint32_t from,
                                                  std::span<const Config> allowed) const;

  /// Canonical node state for `state` (oscillate counter folded as described).
  PrisonerState normalize(PrisonerState state) const;

 private:
  std::uint32_t intern(const PrisonerState& state, std::vector<std::uint32_t>& queue);
  static std::uint64_t key(const PrisonerState& s);

  const Program* program_;
  std::uint16_t configs_;
  std::vector<PrisonerState> nodes_;
  std::vector<CursorEdge> edges_;  // configs_ edges per node
  std::vector<std::uint8_t> can_act_;
  std::unordered_map<std::uint64_t, std::uint32_t> ids_;
};

/// A prisoner is finished when no observation sequence can make him change a
/// room or declare again.
bool is_finished(const Program& program, const PrisonerState& state);

}  // namespace lockstep
