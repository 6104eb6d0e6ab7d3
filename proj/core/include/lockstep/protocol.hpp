#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lockstep/program.hpp"

namespace lockstep {

enum class Guarantee { Winning, Prob1, ProbEps, KnowledgeOnly, Unclaimed };

std::string_view to_string(Guarantee g) noexcept;

struct WinCondition {
  enum class Kind { AllRoomsAllPrisoners, AtLeastOneRoom, AllMustDeclare };
  Kind kind = Kind::AllRoomsAllPrisoners;
  /// Visits each prisoner owes each room (AllRoomsAllPrisoners only).
  std::uint32_t min_visits = 1;

  static WinCondition all_rooms(std::uint32_t ell = 1) { return {Kind::AllRoomsAllPrisoners, ell}; }
  static WinCondition at_least_one_room() { return {Kind::AtLeastOneRoom, 1}; }
  static WinCondition all_declare() { return {Kind::AllMustDeclare, 1}; }

  /// Largest visit count that can matter; counters saturate here.
  std::uint32_t visit_cap() const noexcept { return kind == Kind::AllRoomsAllPrisoners ? min_visits : 1; }

  friend bool operator==(const WinCondition&, const WinCondition&) = default;
};

std::string to_string(const WinCondition& w);

/// A complete protocol for a fixed (n, r): one program per prisoner plus the
/// rooms' starting configurations. Index 0 is the leader where one exists.
struct ProtocolInstance {
  std::string family;  // registry id
  std::string label;
  std::size_t n = 0;
  std::size_t r = 0;
  std::uint16_t m = 2;
  std::vector<Program> programs;
  std::vector<Config> start;
  Guarantee guarantee = Guarantee::Winning;
  WinCondition win;
  std::vector<std::string> config_names;

  /// Non-leaders stay inert until they see a configuration other than 0 or 1.
  bool reduction_ready = false;
  /// Transforms applied on top of `family`, outermost last.
  std::vector<std::string> transforms;

  std::string config_name(Config c) const;
  /// Inverse of config_name; also accepts plain integers.
  Config parse_config(std::string_view text) const;
};

/// Checks the structural invariants every library protocol satisfies: one
/// program per prisoner, one start config per room, all configs < m, and no
/// DECLARE nested inside a REPEAT. Throws ConstructionError.
void validate(const ProtocolInstance& instance);

}  // namespace lockstep
