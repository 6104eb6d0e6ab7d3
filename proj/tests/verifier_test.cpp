#include <gtest/gtest.h>

#include <cstdlib>
#include <deque>
#include <set>

#include "lockstep/protocols.hpp"
#include "lockstep/registry.hpp"
#include "lockstep/scheduling.hpp"
#include "lockstep/verifier.hpp"

#include "support.hpp"

using namespace lockstep;

namespace {

// Independent closure: plain std::set of flattened states, no canonicalization.
struct NaiveResult {
  std::size_t states = 0;
  std::size_t correct = 0;
  std::size_t incorrect = 0;
};

std::vector<std::int64_t> flatten(const WorldState& s) {
  std::vector<std::int64_t> out;
  for (Config c : s.rooms) out.push_back(index(c));
  for (const auto& p : s.prisoners) {
    out.push_back(p.step);
    out.push_back(p.oscillate_net);
    out.push_back(p.declared);
  }
  for (auto v : s.visits) out.push_back(v);
  return out;
}

NaiveResult naive_closure(const ProtocolInstance& inst) {
  const std::uint32_t cap = inst.win.visit_cap();
  const bool all = inst.win.kind == WinCondition::Kind::AllMustDeclare;
  std::set<std::vector<std::int64_t>> seen;
  std::deque<WorldState> queue;
  NaiveResult out;
  const WorldState init = initial_state(inst);
  seen.insert(flatten(init));
  queue.push_back(init);
  while (!queue.empty()) {
    const WorldState s = queue.front();
    queue.pop_front();
    for (std::size_t p = 0; p < inst.n; ++p) {
      for (std::size_t room = 0; room < inst.r; ++room) {
        WorldState t = s;
        const StepResult res = apply_visit(inst, t, {p, room}, cap);
        if (!seen.insert(flatten(t)).second) continue;
        if (res.declaration && !res.correct) {
          ++out.incorrect;
        } else if (all ? t.all_declared() : t.any_declared()) {
          ++out.correct;
        } else {
          queue.push_back(t);
        }
      }
    }
  }
  out.states = seen.size();
  return out;
}

struct Case {
  std::string id;
  std::size_t n;
  std::optional<std::size_t> r;
  std::uint32_t ell = 1;
};

class NaiveOracle : public ::testing::TestWithParam<Case> {};

TEST_P(NaiveOracle, StateCountsMatch) {
  const Case& c = GetParam();
  const auto inst = make_protocol(c.id, {c.n, c.r, c.ell, std::nullopt});
  const auto naive = naive_closure(inst);
  const auto rep = explore(inst);
  EXPECT_EQ(rep.states, naive.states);
  EXPECT_EQ(rep.correct_terminals, naive.correct);
  EXPECT_EQ(rep.incorrect_terminals, naive.incorrect);
  EXPECT_EQ(rep.safe, verdict(naive.incorrect == 0));
}

INSTANTIATE_TEST_SUITE_P(
    Library, NaiveOracle,
    ::testing::Values(Case{"one-room-known", 3, 1}, Case{"one-room-unknown", 3, 1}, Case{"at-least-one-room", 2, 2},
                      Case{"sequential-chain", 2, 2}, Case{"room-at-a-time-six", 2, 2},
                      Case{"two-switch-prisoner", 2, 2}, Case{"two-switch-room", 2, 3},
                      Case{"prob1-3config", 2, 2}, Case{"two-config-prob-eps", 2, 2},
                      Case{"two-rooms-3config", 3, 2}, Case{"multi-declare", 2, 3},
                      Case{"repeated-entries", 2, 2, 2}, Case{"forced-flip", 2, 2},
                      Case{"mutant-two-switch-count", 2, 2}, Case{"one-room-known-per-room", 2, 2}),
    [](const auto& info) { return test::param_name(info.param.id, info.index); });

TEST(Explore, TwoSwitchPrisonerIsWinning) {
  const auto rep = explore(protocols::two_switch_prisoner_at_a_time(2, 2));
  EXPECT_EQ(rep.safe, Verdict::True);
  EXPECT_EQ(rep.live, Verdict::True);
  EXPECT_EQ(strongest_class(rep), Guarantee::Winning);
}

TEST(Explore, Prob1IsNotLive) {
  const auto rep = explore(protocols::three_config_prob1(2, 2));
  EXPECT_EQ(rep.safe, Verdict::True);
  EXPECT_EQ(rep.prob1, Verdict::True);
  EXPECT_EQ(rep.live, Verdict::False);
  ASSERT_TRUE(rep.unlive);
  EXPECT_FALSE(rep.unlive->cycle.empty());
  EXPECT_TRUE(rep.prob1_bound.has_value());
  EXPECT_EQ(strongest_class(rep), Guarantee::Prob1);
}

TEST(Explore, ProbEpsGetsStuck) {
  const auto rep = explore(protocols::two_config_prob_eps(2, 2));
  EXPECT_EQ(rep.safe, Verdict::True);
  EXPECT_EQ(rep.prob_eps, Verdict::True);
  EXPECT_EQ(rep.prob1, Verdict::False);
  ASSERT_TRUE(rep.stuck);
  EXPECT_EQ(strongest_class(rep), Guarantee::ProbEps);
}

TEST(Explore, UnsafeCounterexampleEndsInIncorrectDeclaration) {
  const auto inst = protocols::mutants::two_switch_short_count(2, 2);
  const auto rep = explore(inst);
  EXPECT_EQ(rep.safe, Verdict::False);
  ASSERT_TRUE(rep.unsafe);
  const auto& trace = rep.unsafe->prefix;
  ASSERT_FALSE(trace.empty());
  EXPECT_TRUE(trace.back().declared);
  WorldState s = initial_state(inst);
  StepResult last;
  for (const auto& rec : trace) last = apply_visit(inst, s, {rec.prisoner, rec.room});
  EXPECT_TRUE(last.declaration);
  EXPECT_FALSE(last.correct);
}

TEST(Explore, FairLassoIsFair) {
  const auto inst = protocols::three_config_prob1(2, 2);
  const auto rep = explore(inst);
  ASSERT_TRUE(rep.unlive);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& rec : rep.unlive->cycle) pairs.insert({rec.prisoner, rec.room});
  EXPECT_EQ(pairs.size(), inst.n * inst.r);
  for (const auto& rec : rep.unlive->cycle) EXPECT_FALSE(rec.declared);
}

TEST(Explore, NodeCapLeavesVerdictsUnknown) {
  ExploreOptions o;
  o.node_cap = 50;
  const auto rep = explore(protocols::two_switch_prisoner_at_a_time(3, 3), o);
  EXPECT_FALSE(rep.complete);
  EXPECT_EQ(rep.live, Verdict::Unknown);
  EXPECT_LE(rep.states, 50u);
}

TEST(Explore, UnsafeStillReportedUnderCap) {
  ExploreOptions o;
  o.node_cap = 40;
  const auto rep = explore(protocols::mutants::two_switch_short_count(2, 2), o);
  if (rep.incorrect_terminals > 0) {
    EXPECT_EQ(rep.safe, Verdict::False);
  }
}

TEST(Explore, DepthLimit) {
  ExploreOptions o;
  o.depth_limit = 3;
  const auto rep = explore(protocols::two_switch_prisoner_at_a_time(2, 2), o);
  EXPECT_LE(rep.max_depth, 3u);
  EXPECT_FALSE(rep.complete);
}

TEST(Explore, EnvNodeCap) {
  ::setenv("LOCKSTEP_NODE_CAP", "123", 1);
  EXPECT_EQ(default_node_cap(), 123u);
  ::setenv("LOCKSTEP_NODE_CAP", "12x", 1);
  EXPECT_THROW(default_node_cap(), std::invalid_argument);
  ::unsetenv("LOCKSTEP_NODE_CAP");
  EXPECT_EQ(default_node_cap(), 10'000'000u);
}

TEST(Explore, SymmetryKeepsSafetyAndDropsLiveness) {
  const auto inst = protocols::two_switch_room_at_a_time(2, 3);
  ExploreOptions o;
  o.symmetry = true;
  const auto sym = explore(inst, o);
  const auto full = explore(inst);
  EXPECT_EQ(sym.safe, full.safe);
  EXPECT_EQ(sym.prob1, full.prob1);
  EXPECT_LE(sym.states, full.states);
  EXPECT_EQ(sym.live, Verdict::Unknown);
}

TEST(Explore, SymmetryFindsMutantBug) {
  ExploreOptions o;
  o.symmetry = true;
  const auto rep = explore(protocols::mutants::two_switch_short_count(2, 3), o);
  EXPECT_EQ(rep.safe, Verdict::False);
  ASSERT_TRUE(rep.unsafe);
  EXPECT_TRUE(rep.unsafe->prefix.back().declared);
}

TEST(Explore, RelaxedWinCondition) {
  auto inst = protocols::at_least_one_room(2, 2);
  EXPECT_EQ(explore(inst).safe, Verdict::True);
  inst.win = WinCondition::all_rooms();
  EXPECT_EQ(explore(inst).safe, Verdict::False);
}

TEST(Explore, RunsAreContainedInExploredGraph) {
  for (const std::string id : {"two-switch-prisoner", "prob1-3config", "two-config-prob-eps", "two-switch-room"}) {
    const auto inst = make_protocol(id, {2, id == "two-switch-room" ? 3u : 2u, 1, std::nullopt});
    const Explorer ex(inst);
    const std::uint32_t cap = inst.win.visit_cap();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      SeededRandom rng(inst.n, inst.r, seed);
      WorldState s = initial_state(inst);
      ASSERT_TRUE(ex.contains(s));
      for (std::uint64_t step = 0; step < 300 && !s.any_declared(); ++step) {
        const VisitEvent e = rng.next(WorldView{inst, s, step});
        apply_visit(inst, s, e, cap);
        ASSERT_TRUE(ex.contains(s)) << id << " seed " << seed << " step " << step;
      }
    }
  }
}

TEST(Explore, VisitsNeverDecreaseAlongRuns) {
  const auto inst = protocols::two_switch_room_at_a_time(3, 3);
  SeededRandom rng(3, 3, 5);
  WorldState s = initial_state(inst);
  for (std::uint64_t step = 0; step < 2000 && !s.any_declared(); ++step) {
    const WorldState before = s;
    apply_visit(inst, s, rng.next(WorldView{inst, s, step}));
    for (std::size_t i = 0; i < s.visits.size(); ++i) EXPECT_GE(s.visits[i], before.visits[i]);
  }
}

TEST(Conforms, GuaranteeClasses) {
  ExploreReport rep;
  rep.safe = rep.live = rep.prob1 = rep.prob_eps = Verdict::True;
  EXPECT_EQ(conforms(Guarantee::Winning, rep), Verdict::True);
  EXPECT_EQ(conforms(Guarantee::KnowledgeOnly, rep), Verdict::Unknown);
  EXPECT_EQ(conforms(Guarantee::Unclaimed, rep), Verdict::True);
  rep.live = Verdict::False;
  EXPECT_EQ(conforms(Guarantee::Winning, rep), Verdict::False);
  EXPECT_EQ(conforms(Guarantee::Prob1, rep), Verdict::True);
  rep.safe = Verdict::False;
  EXPECT_EQ(conforms(Guarantee::ProbEps, rep), Verdict::False);
  EXPECT_EQ(strongest_class(rep), Guarantee::Unclaimed);
}

TEST(Knowledge, HoldsAtTwoTwo) {
  const auto rep = check_knowledge(protocols::three_config_knowledge(2, 2));
  EXPECT_EQ(rep.knows, Verdict::True);
  EXPECT_EQ(rep.eventually, Verdict::True);
  EXPECT_EQ(rep.holds(), Verdict::True);
}

TEST(Knowledge, SinglePrisoner) {
  EXPECT_EQ(check_knowledge(protocols::three_config_knowledge(1, 3)).holds(), Verdict::True);
}

TEST(Knowledge, DroppedPrependFailsWithTrace) {
  const auto rep = check_knowledge(protocols::mutants::knowledge_without_prepend(2, 2));
  EXPECT_EQ(rep.holds(), Verdict::False);
  ASSERT_TRUE(rep.counterexample);
  EXPECT_FALSE(rep.counterexample->prefix.empty() && rep.counterexample->cycle.empty());
}

TEST(Verdicts, ThreeValuedLogic) {
  EXPECT_EQ(Verdict::True && Verdict::Unknown, Verdict::Unknown);
  EXPECT_EQ(Verdict::False && Verdict::Unknown, Verdict::False);
  EXPECT_EQ(!Verdict::Unknown, Verdict::Unknown);
  EXPECT_EQ(!Verdict::True, Verdict::False);
}

}  // namespace
