#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lockstep/monitors.hpp"
#include "lockstep/world.hpp"

namespace lockstep {

enum class Verdict { False, True, Unknown };

std::string_view to_string(Verdict v) noexcept;
inline Verdict verdict(bool b) noexcept { return b ? Verdict::True : Verdict::False; }
Verdict operator&&(Verdict a, Verdict b) noexcept;
Verdict operator!(Verdict v) noexcept;

/// What ends a run in the explorer: a declaration (or all declarations, for
/// AllMustDeclare), or every prisoner being unable to act again.
enum class Goal { Declaration, AllFinished };

/// LOCKSTEP_NODE_CAP if set, else 10'000'000. Throws std::invalid_argument
/// on a malformed value.
std::uint64_t default_node_cap();

struct ExploreOptions {
  std::uint64_t node_cap = 0;  // 0: default_node_cap()
  std::optional<std::uint32_t> depth_limit;
  /// Quotient by permutations of rooms that share a start configuration.
  /// Liveness is reported Unknown in this mode.
  bool symmetry = false;
  Goal goal = Goal::Declaration;
  /// Stateless monitors evaluated on every state and edge.
  std::vector<Monitor*> monitors;
};

struct Counterexample {
  std::vector<TraceRecord> prefix;
  /// Repeating part of a lasso; empty for finite counterexamples.
  std::vector<TraceRecord> cycle;
};

struct MonitorReport {
  std::string id;
  bool passed = true;
  std::string message;
  std::optional<Counterexample> trace;
};

struct ExploreReport {
  std::string label;
  std::size_t n = 0;
  std::size_t r = 0;
  std::uint64_t states = 0;
  std::uint64_t edges = 0;
  std::uint32_t max_depth = 0;
  std::uint64_t correct_terminals = 0;
  std::uint64_t incorrect_terminals = 0;
  /// False when the node cap or depth limit cut the search short.
  bool complete = true;

  Verdict safe = Verdict::Unknown;
  Verdict live = Verdict::Unknown;
  Verdict prob1 = Verdict::Unknown;
  Verdict prob_eps = Verdict::Unknown;
  /// Largest shortest distance from a reachable open state to the goal.
  std::optional<std::uint32_t> prob1_bound;

  std::optional<Counterexample> unsafe;  // reaches an incorrect declaration
  std::optional<Counterexample> unlive;  // fair lasso avoiding the goal
  std::optional<Counterexample> stuck;   // reaches a state with no path to the goal

  std::vector<MonitorReport> monitors;
  double seconds = 0;

  bool monitors_passed() const;
};

/// Breadth-first closure over every warden choice.
class Explorer {
 public:
  Explorer(const ProtocolInstance& instance, ExploreOptions options = {});
  ~Explorer();
  Explorer(Explorer&&) noexcept;
  Explorer& operator=(Explorer&&) noexcept;

  const ExploreReport& report() const;
  /// The state (with visit counters capped as in the search) was reached.
  bool contains(const WorldState& state) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ExploreReport explore(const ProtocolInstance& instance, ExploreOptions options = {});

/// Strongest class the report establishes (Unclaimed when not even safe).
Guarantee strongest_class(const ExploreReport& report);
/// Whether the report supports `claimed`. KnowledgeOnly needs check_knowledge.
Verdict conforms(Guarantee claimed, const ExploreReport& report);

struct KnowledgeReport {
  /// Every prisoner at the end of his program has a full visit row.
  Verdict knows = Verdict::Unknown;
  /// Under every fair schedule every prisoner eventually reaches that end.
  Verdict eventually = Verdict::Unknown;
  Verdict holds() const { return knows && eventually; }
  ExploreReport explore;
  std::optional<Counterexample> counterexample;
};

KnowledgeReport check_knowledge(const ProtocolInstance& instance, ExploreOptions options = {});

}  // namespace lockstep
