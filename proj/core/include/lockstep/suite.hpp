#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lockstep/monitors.hpp"
#include "lockstep/verifier.hpp"

namespace lockstep {

/// Explore plus every stateless monitor registered for the instance.
struct Verification {
  ExploreReport report;
  std::optional<KnowledgeReport> knowledge;  // KnowledgeOnly instances
  Verdict claim = Verdict::Unknown;          // the instance's guarantee holds
  bool monitors_passed() const;
  /// True when the node cap or depth limit left a verdict undecided.
  bool resource_limited() const;
};

Verification verify_instance(const ProtocolInstance& instance, ExploreOptions options = {});

/// Stateless monitors registered for the instance, owned by the vector.
std::vector<std::unique_ptr<Monitor>> explorer_monitors(const ProtocolInstance& instance);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0;
  double limit_seconds = 0;
};

/// Criteria 1..11. Each entry runs one criterion at its stated sizes.
std::vector<int> acceptance_ids();
CriterionResult run_criterion(int id);
/// Runs every criterion, reporting each as it completes.
std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& on_result = {});

/// "criterion 3 PASS two-switch theorem: <detail>", plus timing if asked.
std::string format_result(const CriterionResult& result, bool timings);

}  // namespace lockstep
