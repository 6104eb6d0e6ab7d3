#include <gtest/gtest.h>

#include "lockstep/protocols.hpp"
#include "lockstep/s1_adversary.hpp"

using namespace lockstep;

namespace {

ProtocolInstance inert(std::size_t n, std::size_t r) {
  auto inst = protocols::one_room_known(n, r);
  inst.programs.assign(n, Program("inert", {see(config(1))}, 2));
  return inst;
}

TEST(S1Adversary, RequiresTwoConfigsAndFiveRooms) {
  EXPECT_THROW(S1Adversary(protocols::one_room_known(2, 4)), UnsupportedParameter);
  EXPECT_THROW(S1Adversary(protocols::one_room_known(1, 5)), UnsupportedParameter);
  EXPECT_THROW(S1Adversary(protocols::two_switch_prisoner_at_a_time(2, 5)), UnsupportedParameter);
  EXPECT_NO_THROW(S1Adversary(protocols::one_room_known(2, 5)));
}

TEST(S1Adversary, InertProgramsGetLeastRecentScheduling) {
  const auto inst = inert(2, 5);
  S1Adversary adv(inst);
  RunOptions o;
  o.max_steps = 200;
  const auto res = run(inst, adv, o);
  EXPECT_EQ(res.outcome.kind, Outcome::Kind::StepLimit);
  EXPECT_EQ(adv.routed_visits(), 0u);
  EXPECT_EQ(adv.direct_extensions(), 200u);
  EXPECT_FALSE(adv.invariant_violation());
  EXPECT_TRUE(adv.fairness_audit());
  // Least recent first, ties to the lowest pair: a plain cycle over all pairs.
  for (std::size_t t = 0; t < 10; ++t) {
    EXPECT_EQ(res.trace[t].prisoner, t / 5);
    EXPECT_EQ(res.trace[t].room, t % 5);
  }
}

TEST(S1Adversary, FairnessAuditCountsPairs) {
  const auto inst = inert(2, 5);
  S1Adversary adv(inst);
  RunOptions o;
  o.max_steps = 10 * 7;
  const auto res = run(inst, adv, o);
  std::vector<int> count(10, 0);
  for (const auto& rec : res.trace) ++count[rec.prisoner * 5 + rec.room];
  for (int c : count) EXPECT_GE(c, 7);
}

TEST(S1Demo, OneRoomKnownPerRoomIsDefeated) {
  const auto demo = run_s1_demo(protocols::one_room_known(2, 5), 10'000);
  EXPECT_TRUE(demo.defeated());
  EXPECT_FALSE(demo.invariant_violation);
  EXPECT_TRUE(demo.fair);
  if (demo.outcome.kind == Outcome::Kind::DeclaredCorrect) {
    ASSERT_TRUE(demo.alternative);
    EXPECT_EQ(demo.alternative_outcome.kind, Outcome::Kind::DeclaredIncorrect);
    EXPECT_EQ(demo.alternative_outcome.step, demo.outcome.step);
  }
}

TEST(S1Demo, OtherSingleSwitchStrategies) {
  const std::vector<ProtocolInstance> strategies{
      protocols::one_room_unknown(2, config(0), 5), protocols::one_room_unknown(3, config(1), 5),
      protocols::at_least_one_room(2, 5), protocols::two_config_prob_eps(2, 5), protocols::one_room_known(3, 6)};
  for (const auto& inst : strategies) {
    const auto demo = run_s1_demo(inst, 10'000);
    EXPECT_TRUE(demo.defeated()) << inst.label;
    EXPECT_FALSE(demo.invariant_violation) << inst.label << ": " << *demo.invariant_violation;
    EXPECT_TRUE(demo.fair) << inst.label;
  }
}

TEST(S1Demo, TableTracksObservedHistory) {
  const auto inst = protocols::one_room_known(2, 5);
  S1Adversary adv(inst);
  RunOptions o;
  o.max_steps = 30;
  const auto res = run(inst, adv, o);
  OwnershipTable t(2, 2, inst.start);
  for (const auto& rec : res.trace) {
    t.apply({rec.prisoner, inst.parse_config(rec.config_before), inst.parse_config(rec.config_after)});
  }
  EXPECT_EQ(t, adv.table());
}

}  // namespace
