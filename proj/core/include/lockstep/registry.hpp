#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lockstep/protocol.hpp"
#include "lockstep/world.hpp"

namespace lockstep {

struct ProtocolParams {
  std::size_t n = 2;
  std::optional<std::size_t> r;  // protocol default when unset
  std::uint32_t ell = 1;
  /// Comma-separated start configurations (names or numbers), one per room;
  /// a single value applies to every room.
  std::optional<std::string> start;
};

/// Stable identifiers accepted by make_protocol.
std::vector<std::string> protocol_ids();
/// Throws UnknownId, UnsupportedParameter or ConstructionError.
ProtocolInstance make_protocol(std::string_view id, const ProtocolParams& params);

std::vector<std::string> scheduler_ids();
/// `instance` must outlive the scheduler. "lemma1-pair" rewrites the
/// instance's start to (C, D, D, ...) and returns the valid schedule s2.
std::unique_ptr<Scheduler> make_scheduler(std::string_view id, ProtocolInstance& instance, std::uint64_t seed);

/// Parses "a,b,c" (or a single value repeated) against the instance's names.
std::vector<Config> parse_start(const ProtocolInstance& instance, std::string_view text, std::size_t r);

}  // namespace lockstep
