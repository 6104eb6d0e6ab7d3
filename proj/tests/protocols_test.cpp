#include <gtest/gtest.h>

#include "lockstep/cursor_graph.hpp"
#include "lockstep/protocols.hpp"
#include "lockstep/verifier.hpp"
#include "support.hpp"

using namespace lockstep;
using lockstep::test::repeat_counts;
using lockstep::test::run_events;
using Counts = std::vector<std::uint32_t>;

namespace {

constexpr Config kOff = config(0), kOn = config(1);

std::size_t count_leaves(const std::vector<Instruction>& body, std::uint32_t factor = 1) {
  std::size_t total = 0;
  for (const auto& ins : body) {
    if (const auto* rep = std::get_if<Repeat>(&ins.op)) {
      total += count_leaves(rep->body, factor * rep->count);
    } else {
      total += factor;
    }
  }
  return total;
}

TEST(OneRoomKnown, LeaderCountsNMinusOne) {
  EXPECT_EQ(repeat_counts(protocols::one_room_known(5).programs[0]), Counts{4});
}

TEST(OneRoomKnown, SinglePrisonerSeesOffThenDeclares) {
  const auto inst = protocols::one_room_known(1);
  ASSERT_EQ(inst.programs.size(), 1u);
  const auto& body = inst.programs[0].body();
  ASSERT_EQ(body.size(), 2u);
  const auto* s = std::get_if<See>(&body[0].op);
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->target, kOff);
  EXPECT_TRUE(std::holds_alternative<Declare>(body[1].op));
}

TEST(OneRoomKnown, HandTraceLeaderOtherLeader) {
  const auto inst = protocols::one_room_known(2);
  const auto res = run_events(inst, {{0, 0}, {1, 0}, {0, 0}});
  EXPECT_EQ(res.outcome.kind, Outcome::Kind::DeclaredCorrect);
  EXPECT_EQ(res.outcome.step, 3u);
}

TEST(OneRoomUnknown, LeaderCountsTwoNMinusTwo) {
  EXPECT_EQ(repeat_counts(protocols::one_room_unknown(3, kOff).programs[0]), Counts{4});
  EXPECT_EQ(repeat_counts(protocols::one_room_unknown(3, kOff).programs[1]), Counts{2});
}

TEST(OneRoomUnknown, HandTraceStartOn) {
  const auto inst = protocols::one_room_unknown(2, kOn);
  const auto res = run_events(inst, {{1, 0}, {0, 0}, {1, 0}, {0, 0}, {1, 0}, {0, 0}});
  EXPECT_EQ(res.outcome.kind, Outcome::Kind::DeclaredCorrect);
  EXPECT_EQ(res.outcome.step, 4u);  // the leader's second acknowledgment
}

TEST(OneRoomUnknown, StartOffSafeToDepthTwelve) {
  ExploreOptions o;
  o.depth_limit = 12;
  const auto rep = explore(protocols::one_room_unknown(2, kOff), o);
  EXPECT_EQ(rep.incorrect_terminals, 0u);
  EXPECT_GT(rep.correct_terminals, 0u);
}

TEST(AtLeastOneRoom, Counts) {
  const auto a = protocols::at_least_one_room(3, 2);
  EXPECT_EQ(repeat_counts(a.programs[0]), Counts{6});
  EXPECT_EQ(repeat_counts(a.programs[1]), Counts{3});
  const auto b = protocols::at_least_one_room(2, 1);
  EXPECT_EQ(repeat_counts(b.programs[0]), Counts{2});
  EXPECT_EQ(repeat_counts(b.programs[1]), Counts{2});
}

TEST(AtLeastOneRoom, SafeFromAllOn) {
  const auto rep = explore(protocols::at_least_one_room(2, 2));
  EXPECT_EQ(rep.safe, Verdict::True);
}

TEST(SequentialChain, Structure) {
  const auto inst = protocols::sequential_chain(2, 3);
  EXPECT_EQ(inst.m, 3);
  EXPECT_EQ(repeat_counts(inst.programs[0]), Counts{3});
  EXPECT_EQ(repeat_counts(inst.programs[1]), Counts{3});
  EXPECT_FALSE(inst.programs[0].contains_declare());
  EXPECT_TRUE(inst.programs[1].contains_declare());
  const auto* f = std::get_if<Flip>(&inst.programs[1].leaf_at(0).action);
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->from, config(1));
  EXPECT_EQ(f->to, config(2));
}

TEST(SequentialChain, SinglePrisoner) {
  const auto inst = protocols::sequential_chain(1, 3);
  ASSERT_EQ(inst.programs.size(), 1u);
  EXPECT_EQ(inst.programs[0].length(), 4u);
  EXPECT_TRUE(std::holds_alternative<Declare>(inst.programs[0].leaf_at(3).action));
}

TEST(SequentialChain, SafeAtTwoTwo) {
  EXPECT_EQ(explore(protocols::sequential_chain(2, 2)).safe, Verdict::True);
}

TEST(RoomAtATimeSix, SingleRoomInnerCounts) {
  EXPECT_EQ(repeat_counts(protocols::room_at_a_time_six(2, 1).programs[0]), (Counts{1, 1, 1}));
}

TEST(TwoSwitchPrisoner, LeaderShape) {
  const auto inst = protocols::two_switch_prisoner_at_a_time(3, 2);
  const Program& leader = inst.programs[0];
  EXPECT_EQ(count_leaves(leader.body()), 2u + 2 + 1 + 3 + 1);
  EXPECT_TRUE(std::holds_alternative<Declare>(leader.leaf_at(leader.length() - 1).action));
}

TEST(TwoSwitchPrisoner, NonLeadersInertOnZeroOne) {
  const auto inst = protocols::two_switch_prisoner_at_a_time(3, 2);
  EXPECT_TRUE(inst.reduction_ready);
  for (std::size_t i = 1; i < inst.n; ++i) {
    for (Config c : {config(0), config(1), config(2)}) {
      EXPECT_FALSE(visit({}, inst.programs[i], c).second.fired);
    }
    EXPECT_TRUE(visit({}, inst.programs[i], config(3)).second.fired);
  }
}

TEST(TwoSwitchRoom, TransitionCountsPerOuterIteration) {
  const auto inst = protocols::two_switch_room_at_a_time(3, 5);
  const auto counts = repeat_counts(inst.programs[0]);
  // Per outer iteration: count-0, transition-0, count-1, transition-1.
  EXPECT_EQ(counts, (Counts{1, 4, 1, 3, 1, 2, 1, 1}));
}

TEST(TwoSwitchRoom, EmptyInnerRepeatAtNTwo) {
  const auto inst = protocols::two_switch_room_at_a_time(2, 3);
  EXPECT_EQ(repeat_counts(inst.programs[0]), (Counts{0, 2, 0, 1}));
}

TEST(TwoSwitchRoom, RejectsEvenR) {
  EXPECT_THROW(protocols::two_switch_room_at_a_time(2, 4), UnsupportedParameter);
  EXPECT_THROW(protocols::two_switch_room_at_a_time(2, 1), UnsupportedParameter);
}

TEST(ArbitraryStart, AllZeroCounts) {
  for (std::size_t n : {2u, 3u}) {
    for (std::size_t r : {1u, 2u, 3u}) {
      const auto base = protocols::two_switch_prisoner_at_a_time(n, r);
      const std::vector<Config> start(r, config(0));
      const auto w = protocols::arbitrary_start_wrapper(base, start);
      const auto leader = repeat_counts(w.programs[0]);
      EXPECT_EQ(leader[0], 0u);
      EXPECT_EQ(leader[1], (n - 1) * (r + 1));
      EXPECT_EQ(repeat_counts(w.programs[1])[0], r + 1);
    }
  }
}

TEST(ArbitraryStart, NextReadyStartIsWinning) {
  const auto base = protocols::two_switch_prisoner_at_a_time(2, 2);
  const std::vector<Config> start{config(2), config(3)};
  const auto rep = explore(protocols::arbitrary_start_wrapper(base, start));
  EXPECT_EQ(rep.safe, Verdict::True);
  EXPECT_EQ(rep.live, Verdict::True);
}

TEST(ArbitraryStart, RejectsBasesThatActOnZeroOne) {
  const std::vector<Config> start(2, config(0));
  EXPECT_THROW(protocols::arbitrary_start_wrapper(protocols::two_config_prob_eps(2, 2), start), ConstructionError);
  EXPECT_THROW(protocols::arbitrary_start_wrapper(protocols::two_switch_prisoner_at_a_time(2, 2),
                                                  std::vector<Config>(3, config(0))),
               ConstructionError);
}

TEST(Knowledge, NoDeclareAnywhere) {
  for (std::size_t n : {1u, 2u, 4u}) {
    for (const auto& p : protocols::three_config_knowledge(n, 3).programs) EXPECT_FALSE(p.contains_declare());
  }
}

TEST(Knowledge, SinglePrisonerToursTwice) {
  const auto inst = protocols::three_config_knowledge(1, 2);
  // seed NEXT, take it, up over both rooms, down over both rooms, pass.
  const auto res = run_events(inst, {{0, 0}, {0, 0}, {0, 0}, {0, 1}, {0, 0}, {0, 1}, {0, 0}});
  EXPECT_TRUE(inst.programs[0].at_end(res.final_state.prisoners[0]));
  EXPECT_EQ(res.final_state.visit_count(0, 1), 2u);
}

TEST(Prob1, MiddlePrisonerShape) {
  const auto inst = protocols::three_config_prob1(3, 2);
  const Program& mid = inst.programs[1];
  EXPECT_EQ(repeat_counts(mid), (Counts{1, 4, 4, 4, 1}));
  bool has_osc = false;
  for (const auto& ins : mid.body()) {
    if (const auto* o = std::get_if<Oscillate>(&ins.op)) {
      has_osc = true;
      EXPECT_EQ(o->first, config(1));
      EXPECT_EQ(o->second, config(0));
      EXPECT_EQ(o->k, 1u);
    }
  }
  EXPECT_TRUE(has_osc);
}

TEST(ProbEps, LoopCounts) {
  const auto inst = protocols::two_config_prob_eps(2, 2);
  EXPECT_EQ(repeat_counts(inst.programs[0]), (Counts{2, 2, 2, 3}));
  EXPECT_EQ(repeat_counts(inst.programs[1]), (Counts{3, 2, 2}));
  EXPECT_TRUE(inst.programs[1].contains_declare());
}

TEST(ProbEps, LastPrisonerFirstGetsStuck) {
  const auto inst = protocols::two_config_prob_eps(2, 2);
  std::vector<VisitEvent> events;
  for (int i = 0; i < 4; ++i) events.push_back({1, static_cast<std::size_t>(i % 2)});
  for (int i = 0; i < 2000; ++i) events.push_back({static_cast<std::size_t>(i % 2), static_cast<std::size_t>((i / 2) % 2)});
  EXPECT_EQ(run_events(inst, events).outcome.kind, Outcome::Kind::StepLimit);
}

TEST(TwoRooms, LeaderShape) {
  const auto inst = protocols::two_rooms_three_configs(2);
  const auto& body = inst.programs[0].body();
  ASSERT_EQ(body.size(), 3u);
  const auto* f = std::get_if<Flip>(&body[0].op);
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(inst.config_name(f->from), "OFF");
  EXPECT_EQ(inst.config_name(f->to), "UP");
  EXPECT_EQ(repeat_counts(inst.programs[0]), Counts{1});
  EXPECT_TRUE(std::holds_alternative<Declare>(body[2].op));
}

TEST(TwoRooms, NonLeaderWaitsForUp) {
  const auto inst = protocols::two_rooms_three_configs(3);
  EXPECT_FALSE(visit({}, inst.programs[1], config(0)).second.fired);
  EXPECT_FALSE(visit({}, inst.programs[1], config(1)).second.fired);
}

TEST(MultipleDeclarations, AppendedInstructions) {
  const auto base = protocols::two_switch_room_at_a_time(2, 3);
  const auto md = protocols::with_multiple_declarations(base);
  EXPECT_EQ(count_leaves(md.programs[0].body()), count_leaves(base.programs[0].body()) + 1);
  EXPECT_EQ(count_leaves(md.programs[1].body()), count_leaves(base.programs[1].body()) + 2);
  EXPECT_EQ(md.win, WinCondition::all_declare());
  EXPECT_THROW(protocols::with_multiple_declarations(protocols::two_switch_prisoner_at_a_time(2, 2)),
               ConstructionError);
}

TEST(RepeatedEntries, EllOneMatchesBase) {
  const auto base = protocols::two_switch_prisoner_at_a_time(2, 2);
  const auto one = protocols::with_repeated_entries(base, 1);
  EXPECT_EQ(explore(one).states, explore(base).states);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(one.programs[i].length(), base.programs[i].length());
}

TEST(RepeatedEntries, TourBlockScales) {
  const auto base = protocols::two_switch_prisoner_at_a_time(2, 3);
  const auto three = protocols::with_repeated_entries(base, 3);
  const auto tour = [](const Program& p) {
    return p.steps_with_note("tour-up").size() + p.steps_with_note("tour-down").size();
  };
  EXPECT_EQ(tour(three.programs[1]), 3 * tour(base.programs[1]));
  EXPECT_EQ(three.win.min_visits, 3u);
}

TEST(ForcedFlipTransform, DoublesConfigs) {
  const auto base = protocols::two_switch_prisoner_at_a_time(2, 2);
  const auto ff = protocols::forced_flip_transform(base);
  EXPECT_EQ(ff.m, 8);
  EXPECT_EQ(ff.start, (std::vector<Config>{config(0), config(0)}));
  EXPECT_EQ(ff.config_names[5], "NEXT.1");
  EXPECT_THROW(protocols::forced_flip_transform(ff), ConstructionError);
}

TEST(ForcedFlipTransform, EveryVisitChangesTheRoom) {
  const auto ff = protocols::forced_flip_transform(protocols::two_switch_prisoner_at_a_time(2, 2));
  WorldState s = initial_state(ff);
  for (std::uint64_t t = 0; t < 200 && !s.any_declared(); ++t) {
    const VisitEvent e{t % 2, (t / 2 + t / 7) % 2};
    const Config before = s.rooms[e.room];
    apply_visit(ff, s, e);
    EXPECT_NE(s.rooms[e.room], before);
  }
}

TEST(Validate, LibraryInstancesPass) {
  EXPECT_NO_THROW(validate(protocols::two_switch_room_at_a_time(3, 5)));
  auto bad = protocols::one_room_known(2);
  bad.start.push_back(config(0));
  EXPECT_THROW(validate(bad), ConstructionError);
}

TEST(Mutants, DifferFromBase) {
  EXPECT_EQ(repeat_counts(protocols::mutants::two_switch_short_count(3, 2).programs[0]).back(), 2u);
  EXPECT_LT(protocols::mutants::prob1_without_see(2, 2).programs[1].length(),
            protocols::three_config_prob1(2, 2).programs[1].length());
  EXPECT_LT(protocols::mutants::knowledge_without_prepend(2, 2).programs[0].length(),
            protocols::three_config_knowledge(2, 2).programs[0].length());
}

}  // namespace
