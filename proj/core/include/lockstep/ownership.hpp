#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lockstep/monitors.hpp"

namespace lockstep {

/// What the prisoners collectively can know about one visit: who entered a
/// room in which configuration and in which configuration it was left.
struct ObservedEvent {
  std::size_t prisoner = 0;
  Config in{};
  Config out{};

  friend bool operator==(const ObservedEvent&, const ObservedEvent&) = default;
};

using OwnershipMatrix = std::vector<std::vector<bool>>;  // [prisoner][config]

/// Provable ownership maintained incrementally from the observed history.
class OwnershipTable {
 public:
  OwnershipTable(std::size_t n, std::uint16_t m, std::span<const Config> start);

  /// Throws HistoryCorruption if no room is in `event.in`.
  void apply(const ObservedEvent& event);

  std::size_t n() const noexcept { return n_; }
  std::uint16_t m() const noexcept { return m_; }
  std::uint32_t count(Config c) const { return counts_[index(c)]; }
  bool owns(std::size_t p, Config c) const { return owns_[p * m_ + index(c)] != 0; }
  bool owns_all(std::size_t p) const;
  /// Owns some configuration that currently has a room.
  bool owns_nonempty(std::size_t p) const;
  OwnershipMatrix matrix() const;

  friend bool operator==(const OwnershipTable&, const OwnershipTable&) = default;

 private:
  std::size_t n_;
  std::uint16_t m_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint8_t> owns_;
};

OwnershipTable apply_event(OwnershipTable table, const ObservedEvent& event);

/// Ownership facts that hold in every room assignment consistent with the
/// history. Limited to r <= 5 rooms and 12 events (ResourceLimit otherwise).
OwnershipMatrix provable_ownership_bruteforce(std::span<const Config> start, std::span<const ObservedEvent> history,
                                              std::size_t n, std::uint16_t m);

/// A room assignment of an observed history: `rooms[t]` realizes event t.
struct Realization {
  std::vector<std::size_t> rooms;
  std::size_t prisoner = 0;  // who has not been in
  std::size_t room = 0;      // this room at the end
};

/// Searches the room assignments consistent with `history` for one that ends
/// with some prisoner never having entered some room. The number of distinct
/// worlds per step is capped at `world_cap` (ResourceLimit beyond).
std::optional<Realization> find_unvisited_realization(std::span<const Config> start,
                                                      std::span<const ObservedEvent> history, std::size_t n,
                                                      std::size_t world_cap = 200'000);

/// Run-only monitors: "declare-ownership" (nobody declares before every
/// prisoner provably owns every configuration) and "finish-ownership" (nobody
/// becomes finished before provably owning every configuration).
std::unique_ptr<Monitor> make_declare_ownership_monitor(const ProtocolInstance& instance);
std::unique_ptr<Monitor> make_finish_ownership_monitor(const ProtocolInstance& instance);

}  // namespace lockstep
