#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lockstep/config.hpp"

namespace lockstep {

// Guarded commands. Each one consumes at most one visit when it fires.

/// Wait for a room in `from`, reconfigure it to `to`.
struct Flip {
  Config from;
  Config to;
};

/// Wait for a room whose configuration is not in `excluded`, set it to `to`.
struct FlipNotIn {
  std::vector<Config> excluded;
  Config to;
};

/// Wait for a room in `target`; leave it unchanged.
struct See {
  Config target;
};

/// Toggle rooms between `first` and `second` until first->second toggles
/// outnumber second->first toggles by `k`.
struct Oscillate {
  Config first;
  Config second;
  std::uint32_t k = 1;
};

/// Announce that every prisoner has been in every room.
struct Declare {};

struct Instruction;

struct Repeat {
  std::uint32_t count = 0;
  std::vector<Instruction> body;
};

struct Instruction {
  std::variant<Flip, FlipNotIn, See, Oscillate, Declare, Repeat> op;
  // Free-form annotation, used by invariant monitors to locate program regions.
  std::string note;
};

Instruction flip(Config from, Config to, std::string note = {});
Instruction flip_not_in(std::vector<Config> excluded, Config to, std::string note = {});
Instruction see(Config target, std::string note = {});
Instruction oscillate(Config first, Config second, std::uint32_t k, std::string note = {});
Instruction declare(std::string note = {});
Instruction repeat(std::uint32_t count, std::vector<Instruction> body, std::string note = {});

/// A non-Repeat instruction, as it appears at one position of the expanded program.
using Action = std::variant<Flip, FlipNotIn, See, Oscillate, Declare>;

struct Leaf {
  Action action;
  std::string note;
};

/// Position of a cursor step inside the structured program.
struct Location {
  const Leaf* leaf = nullptr;
  /// Zero-based iteration counter of every enclosing Repeat, outermost first.
  std::vector<std::uint32_t> iterations;
};

/// Execution cursor of one prisoner.
///
/// `step` indexes the loop-expanded instruction sequence; `step == length()`
/// means the prisoner ran off the end of the program. `oscillate_net` is only
/// meaningful while the cursor sits on an Oscillate and is reset to zero on
/// every advance.
struct PrisonerState {
  std::uint32_t step = 0;
  std::int32_t oscillate_net = 0;
  bool declared = false;

  friend bool operator==(const PrisonerState&, const PrisonerState&) = default;
};

struct VisitOutcome {
  Config new_config{};
  bool declared = false;
  /// The instruction under the cursor matched and executed during this visit.
  bool fired = false;
};

/// A prisoner's strategy: structured instruction tree with an on-demand view of
/// its loop expansion. Programs are immutable values.
class Program {
 public:
  Program() = default;
  /// Throws std::invalid_argument if a config is >= config_count, a Repeat body
  /// is empty, an Oscillate is degenerate, or the expansion overflows 32 bits.
  Program(std::string label, std::vector<Instruction> body, std::uint16_t config_count);

  const std::string& label() const noexcept { return label_; }
  const std::vector<Instruction>& body() const noexcept { return body_; }

  /// Number of configurations a room can be in, as seen by this program.
  std::uint16_t config_count() const noexcept {
    return forced_flip_ ? static_cast<std::uint16_t>(2 * base_config_count_) : base_config_count_;
  }
  std::uint16_t base_config_count() const noexcept { return base_config_count_; }

  /// Under forced flipping every configuration c is split into 2c and 2c+1;
  /// guards match both halves and a visit that would leave the room unchanged
  /// toggles the low bit instead.
  bool forced_flip() const noexcept { return forced_flip_; }
  Program with_forced_flip() const;

  /// Length of the loop-expanded instruction sequence.
  std::uint32_t length() const noexcept { return length_; }
  /// Cursor positions: every expanded instruction plus the end position.
  std::uint32_t position_count() const noexcept { return length_ + 1; }

  const Leaf& leaf_at(std::uint32_t step) const;
  Location locate(std::uint32_t step) const;
  std::vector<std::uint32_t> steps_with_note(std::string_view note) const;

  bool at_end(const PrisonerState& s) const noexcept { return s.step >= length_; }
  bool contains_declare() const noexcept;
  bool declare_inside_repeat() const noexcept;

 private:
  struct Node {
    std::uint32_t count = 1;  // Repeat count; 1 for leaves
    std::uint32_t leaf = 0;   // valid iff children is empty and is_leaf
    bool is_leaf = false;
    std::uint64_t expanded = 0;
    std::vector<std::uint32_t> children;
  };

  std::uint32_t build(const Instruction& ins, bool inside_repeat);
  const Node& descend(std::uint32_t step, std::vector<std::uint32_t>* iterations) const;

  std::string label_;
  std::vector<Instruction> body_;
  std::uint16_t base_config_count_ = 2;
  bool forced_flip_ = false;
  std::vector<Node> nodes_;  // nodes_[0] is the root sequence
  std::vector<Leaf> leaves_;
  std::uint32_t length_ = 0;
  bool has_declare_ = false;
  bool declare_in_repeat_ = false;
};

/// One visit of a prisoner to a room observed in configuration `observed`.
///
/// At most one guarded instruction fires; a Declare that directly follows it
/// executes in the same visit. A declared or finished prisoner leaves the room
/// untouched (except for the parity toggle under forced flipping).
std::pair<PrisonerState, VisitOutcome> visit(const PrisonerState& state, const Program& program,
                                             Config observed);

/// Listing in FLIP / SEE / OSCILLATE / REPEAT / DECLARE notation.
std::string to_listing(const Program& program, std::span<const std::string> config_names);

}  // namespace lockstep
