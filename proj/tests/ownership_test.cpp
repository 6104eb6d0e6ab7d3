#include <gtest/gtest.h>

#include <random>

#include "lockstep/ownership.hpp"

using namespace lockstep;

namespace {

constexpr Config c0 = config(0), c1 = config(1);

TEST(Ownership, EmptyHistoryOwnsEmptyConfigs) {
  const std::vector<Config> start{c0, c0, config(2)};
  const OwnershipTable t(2, 4, start);
  for (std::size_t p = 0; p < 2; ++p) {
    EXPECT_FALSE(t.owns(p, c0));
    EXPECT_TRUE(t.owns(p, c1));
    EXPECT_FALSE(t.owns(p, config(2)));
    EXPECT_TRUE(t.owns(p, config(3)));
  }
  EXPECT_EQ(t.matrix(), provable_ownership_bruteforce(start, {}, 2, 4));
}

TEST(Ownership, SingleFlipOwnsTheOnlyOneRoom) {
  const std::vector<Config> start(5, c0);
  OwnershipTable t(3, 2, start);
  t.apply({1, c0, c1});
  EXPECT_TRUE(t.owns(1, c1));
  for (std::size_t p = 0; p < 3; ++p) EXPECT_FALSE(t.owns(p, c0));
  EXPECT_FALSE(t.owns(0, c1));
  EXPECT_FALSE(t.owns(2, c1));
  const ObservedEvent h[] = {{1, c0, c1}};
  EXPECT_EQ(t.matrix(), provable_ownership_bruteforce(start, h, 3, 2));
}

TEST(Ownership, SecondFlipRemovesOwnership) {
  const std::vector<Config> start(5, c0);
  OwnershipTable t(3, 2, start);
  t.apply({1, c0, c1});
  t.apply({2, c0, c1});
  EXPECT_FALSE(t.owns(1, c1));
  EXPECT_FALSE(t.owns(2, c1));
  EXPECT_EQ(t.count(c1), 2u);
  const ObservedEvent h[] = {{1, c0, c1}, {2, c0, c1}};
  EXPECT_EQ(t.matrix(), provable_ownership_bruteforce(start, h, 3, 2));
}

TEST(Ownership, ImpossibleEventIsCorruption) {
  const std::vector<Config> start(2, c0);
  OwnershipTable t(2, 2, start);
  EXPECT_THROW(t.apply({0, c1, c0}), HistoryCorruption);
}

TEST(Ownership, ApplyEventIsFunctional) {
  const std::vector<Config> start(3, c0);
  const OwnershipTable t(2, 2, start);
  const auto u = apply_event(t, {0, c0, c1});
  EXPECT_NE(t, u);
  OwnershipTable v = t;
  v.apply({0, c0, c1});
  EXPECT_EQ(u, v);
}

TEST(Ownership, BruteforceLimits) {
  const std::vector<Config> start(6, c0);
  EXPECT_THROW(provable_ownership_bruteforce(start, {}, 2, 2), ResourceLimit);
}

TEST(Ownership, IncrementalMatchesBruteforceOnRandomHistories) {
  std::mt19937_64 rng(99);
  constexpr std::size_t n = 2, r = 5;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Config> rooms(r);
    for (auto& c : rooms) c = config(rng() % 2);
    const std::vector<Config> start = rooms;
    std::vector<ObservedEvent> history;
    const std::size_t len = rng() % 13;
    OwnershipTable t(n, 2, start);
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t p = rng() % n, room = rng() % r;
      const Config out = config(rng() % 2);
      history.push_back({p, rooms[room], out});
      rooms[room] = out;
      t.apply(history.back());
      ASSERT_EQ(t.matrix(), provable_ownership_bruteforce(start, history, n, 2)) << "trial " << trial;
    }
  }
}

TEST(Ownership, IncrementalMatchesBruteforceThreeConfigs) {
  std::mt19937_64 rng(5);
  constexpr std::size_t n = 3, r = 4;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Config> rooms(r);
    for (auto& c : rooms) c = config(rng() % 3);
    const std::vector<Config> start = rooms;
    std::vector<ObservedEvent> history;
    OwnershipTable t(n, 3, start);
    for (std::size_t i = 0; i < 8; ++i) {
      const std::size_t p = rng() % n, room = rng() % r;
      const Config out = config(rng() % 3);
      history.push_back({p, rooms[room], out});
      rooms[room] = out;
      t.apply(history.back());
    }
    EXPECT_EQ(t.matrix(), provable_ownership_bruteforce(start, history, n, 3)) << "trial " << trial;
  }
}

TEST(Realization, SingleRoomHasNoUnvisitedRealization) {
  const std::vector<Config> start{c0};
  const ObservedEvent h[] = {{0, c0, c1}};
  EXPECT_FALSE(find_unvisited_realization(start, h, 1));
}

TEST(Realization, FindsAnUnvisitedRoom) {
  const std::vector<Config> start{c0, c0};
  const ObservedEvent h[] = {{0, c0, c1}, {0, c1, c0}};
  const auto real = find_unvisited_realization(start, h, 1);
  ASSERT_TRUE(real);
  ASSERT_EQ(real->rooms.size(), 2u);
  // Both visits went to the same room, leaving the other untouched.
  EXPECT_EQ(real->rooms[0], real->rooms[1]);
  EXPECT_NE(real->room, real->rooms[0]);
  EXPECT_EQ(real->prisoner, 0u);
}

TEST(Realization, ForcedCoverageHasNone) {
  // Two rooms both flipped to 1: each flip needed a distinct 0-room.
  const std::vector<Config> start{c0, c0};
  const ObservedEvent h[] = {{0, c0, c1}, {0, c0, c1}};
  EXPECT_FALSE(find_unvisited_realization(start, h, 1));
}

}  // namespace
