#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lockstep/world.hpp"

namespace lockstep {

/// An invariant checked on states and on transitions.
///
/// Monitors marked `stateless()` depend only on their arguments and can run
/// inside the explorer; the others accumulate history and only make sense on
/// a single run.
class Monitor {
 public:
  virtual ~Monitor() = default;
  virtual std::string_view id() const = 0;
  virtual bool stateless() const { return true; }
  virtual std::optional<std::string> check_state(const WorldState& /*state*/) { return std::nullopt; }
  virtual std::optional<std::string> check_edge(const WorldState& /*from*/, VisitEvent /*event*/,
                                                const StepResult& /*result*/, const WorldState& /*to*/) {
    return std::nullopt;
  }
};

/// Ids of every registered monitor.
std::vector<std::string> monitor_ids();
/// Ids of the monitors registered for this instance's family.
std::vector<std::string> monitors_for(const ProtocolInstance& instance);
/// Throws UnknownId for unregistered ids, ConstructionError if the monitor
/// does not apply to the instance. The instance must outlive the monitor.
std::unique_ptr<Monitor> make_monitor(std::string_view id, const ProtocolInstance& instance);

}  // namespace lockstep

namespace lockstep {

/// Per-step imbalance ((0->1 fires) - (1->0 fires)) of a two-configuration
/// program: entry s is the tally once the first s instructions have fired.
std::vector<int> imbalance_profile(const Program& program);

}  // namespace lockstep
