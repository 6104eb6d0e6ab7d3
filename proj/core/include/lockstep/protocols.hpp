#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "lockstep/protocol.hpp"

namespace lockstep::protocols {

// Single-switch counting protocols.

/// Leader acknowledges n-1 ON signals and declares; every other prisoner
/// signals once. With n = 1 the lone prisoner waits to see OFF. `r` rooms
/// run the same programs (only r = 1 is a winning instance).
ProtocolInstance one_room_known(std::size_t n, std::size_t r = 1);
/// Unknown start: each non-leader signals twice, leader counts 2n-2. With
/// r > 1 every room starts in `start` and the same programs run unchanged.
ProtocolInstance one_room_unknown(std::size_t n, Config start, std::size_t r = 1);
/// Relaxed objective (everyone visits at least one room); any start.
ProtocolInstance at_least_one_room(std::size_t n, std::size_t r);

// Known-start multi-room protocols.

/// m = n+1; prisoner i moves every room from i-1 to i.
ProtocolInstance sequential_chain(std::size_t n, std::size_t r);
/// Six configurations, one room at a time with a 0/1 and a 0'/1' round.
ProtocolInstance room_at_a_time_six(std::size_t n, std::size_t r);
/// Two switches, one prisoner at a time (configs 0, 1, NEXT, READY).
ProtocolInstance two_switch_prisoner_at_a_time(std::size_t n, std::size_t r);
/// Two switches, one room at a time (configs 0, 1, UP, DONE). Odd r >= 3 only.
ProtocolInstance two_switch_room_at_a_time(std::size_t n, std::size_t r);

/// Prepends the cleanup phase that turns a base winning from all-0 into one
/// winning from the given known start. The base must use 0 as its start and
/// keep non-leaders inert on {0, 1}.
ProtocolInstance arbitrary_start_wrapper(const ProtocolInstance& base, std::span<const Config> start);

// Three-configuration protocols.

/// Every prisoner eventually knows he visited all rooms; nobody declares.
ProtocolInstance three_config_knowledge(std::size_t n, std::size_t r);
/// Wins with probability 1 (uses OSCILLATE for the hand-off).
ProtocolInstance three_config_prob1(std::size_t n, std::size_t r);
/// Two rooms, configs UP / ON / OFF.
ProtocolInstance two_rooms_three_configs(std::size_t n);

/// Two configurations, never declares wrongly but can get stuck.
ProtocolInstance two_config_prob_eps(std::size_t n, std::size_t r);

// Transforms.

/// All prisoners declare: leader raises a DONE room to UP, others wait for UP.
/// Base must come from two_switch_room_at_a_time.
ProtocolInstance with_multiple_declarations(const ProtocolInstance& base);
/// Each prisoner repeats his tour block `ell` times; win condition needs `ell`
/// visits per (prisoner, room). Base must come from two_switch_prisoner_at_a_time.
ProtocolInstance with_repeated_entries(const ProtocolInstance& base, std::uint32_t ell);
/// Doubles the configurations so that every visit changes the room.
ProtocolInstance forced_flip_transform(const ProtocolInstance& base);

// Deliberately broken variants used to show the checkers catch mistakes.
namespace mutants {
/// Leader counts n-1 hand-offs instead of n.
ProtocolInstance two_switch_short_count(std::size_t n, std::size_t r);
/// Non-first prisoners skip the SEE that waits for the hand-off signal.
ProtocolInstance prob1_without_see(std::size_t n, std::size_t r);
/// Leader never places the initial NEXT.
ProtocolInstance knowledge_without_prepend(std::size_t n, std::size_t r);
}  // namespace mutants

}  // namespace lockstep::protocols
