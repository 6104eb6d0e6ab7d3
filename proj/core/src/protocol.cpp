#include "lockstep/protocol.hpp"

#include <algorithm>
#include <charconv>

namespace lockstep {

std::string_view to_string(Guarantee g) noexcept {
  switch (g) {
    case Guarantee::Winning: return "winning";
    case Guarantee::Prob1: return "prob1";
    case Guarantee::ProbEps: return "prob-eps";
    case Guarantee::KnowledgeOnly: return "knowledge-only";
    case Guarantee::Unclaimed: return "unclaimed";
  }
  return "?";
}

std::string to_string(const WinCondition& w) {
  switch (w.kind) {
    case WinCondition::Kind::AllRoomsAllPrisoners:
      return w.min_visits == 1 ? "all-rooms" : "all-rooms(ell=" + std::to_string(w.min_visits) + ")";
    case WinCondition::Kind::AtLeastOneRoom: return "at-least-one-room";
    case WinCondition::Kind::AllMustDeclare: return "all-declare";
  }
  return "?";
}

std::string ProtocolInstance::config_name(Config c) const {
  if (index(c) < config_names.size()) return config_names[index(c)];
  return std::to_string(index(c));
}

Config ProtocolInstance::parse_config(std::string_view text) const {
  const auto it = std::find(config_names.begin(), config_names.end(), text);
  if (it != config_names.end()) return config(static_cast<unsigned>(it - config_names.begin()));
  unsigned value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || value >= m) {
    throw std::invalid_argument("unknown configuration '" + std::string(text) + "' for " + label);
  }
  return config(value);
}

void validate(const ProtocolInstance& instance) {
  const auto fail = [&](const std::string& what) {
    throw ConstructionError(instance.label + ": " + what);
  };
  if (instance.n == 0 || instance.r == 0) fail("needs at least one prisoner and one room");
  if (instance.programs.size() != instance.n) fail("expected one program per prisoner");
  if (instance.start.size() != instance.r) fail("expected one start configuration per room");
  for (Config c : instance.start) {
    if (index(c) >= instance.m) fail("start configuration out of range");
  }
  for (const auto& p : instance.programs) {
    if (p.config_count() != instance.m) fail("program '" + p.label() + "' disagrees on m");
    if (p.declare_inside_repeat()) fail("program '" + p.label() + "' declares inside a REPEAT");
  }
}

}  // namespace lockstep
