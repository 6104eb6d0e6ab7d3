#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lockstep {

/// A room's switch state: one index in [0, m). Protocols attach display names.
enum class Config : std::uint16_t {};

constexpr std::uint16_t index(Config c) noexcept { return static_cast<std::uint16_t>(c); }
constexpr Config config(unsigned v) noexcept { return Config{static_cast<std::uint16_t>(v)}; }

/// Parameter outside what a protocol or adversary supports (e.g. even r for
/// the two-switch room-at-a-time protocol).
class UnsupportedParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A transform or wrapper was applied to a base it does not accept.
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exploration or enumeration exceeded its configured bound.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An observed event that cannot have happened given the room tallies.
class HistoryCorruption : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown registry id (protocol, scheduler, invariant).
class UnknownId : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace lockstep
