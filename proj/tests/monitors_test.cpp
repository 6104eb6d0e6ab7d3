#include <gtest/gtest.h>

#include <algorithm>

#include "lockstep/monitors.hpp"
#include "lockstep/protocols.hpp"
#include "lockstep/registry.hpp"
#include "lockstep/scheduling.hpp"
#include "lockstep/suite.hpp"

#include "support.hpp"

using namespace lockstep;

namespace {

bool has(const std::vector<std::string>& ids, const std::string& id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

const MonitorReport& report_for(const Verification& v, const std::string& id) {
  for (const auto& m : v.report.monitors) {
    if (m.id == id) return m;
  }
  throw std::out_of_range(id);
}

TEST(Registry, MonitorsForFamilies) {
  const auto tsp = monitors_for(protocols::two_switch_prisoner_at_a_time(2, 2));
  EXPECT_TRUE(has(tsp, "two-switch-stage"));
  EXPECT_TRUE(has(tsp, "two-switch-count"));
  EXPECT_TRUE(has(tsp, "visits-monotone"));
  EXPECT_FALSE(has(tsp, "imbalance"));
  EXPECT_TRUE(has(monitors_for(protocols::two_config_prob_eps(2, 2)), "imbalance"));
  EXPECT_TRUE(has(monitors_for(protocols::room_at_a_time_six(2, 2)), "done-stable"));
  EXPECT_THROW(make_monitor("nope", protocols::one_room_known(2)), UnknownId);
  EXPECT_THROW(make_monitor("imbalance", protocols::one_room_known(2)), ConstructionError);
}

TEST(Monitors, StatelessFlags) {
  const auto inst = protocols::two_switch_prisoner_at_a_time(2, 2);
  EXPECT_TRUE(make_monitor("two-switch-stage", inst)->stateless());
  EXPECT_FALSE(make_monitor("declare-ownership", inst)->stateless());
  EXPECT_FALSE(make_monitor("finish-ownership", inst)->stateless());
}

struct Case {
  std::string id;
  std::size_t n, r;
};

class RegisteredMonitorsPass : public ::testing::TestWithParam<Case> {};

TEST_P(RegisteredMonitorsPass, OverExhaustiveExploration) {
  const auto& c = GetParam();
  const auto inst = make_protocol(c.id, {c.n, c.r, 1, std::nullopt});
  const Verification v = verify_instance(inst);
  EXPECT_TRUE(v.monitors_passed());
  for (const auto& m : v.report.monitors) EXPECT_TRUE(m.passed) << m.id << ": " << m.message;
  EXPECT_FALSE(v.report.monitors.empty());
}

INSTANTIATE_TEST_SUITE_P(Library, RegisteredMonitorsPass,
                         ::testing::Values(Case{"two-switch-prisoner", 2, 2}, Case{"two-switch-prisoner", 3, 2},
                                           Case{"two-switch-prisoner", 2, 3}, Case{"two-switch-room", 2, 3},
                                           Case{"room-at-a-time-six", 2, 2}, Case{"prob1-3config", 2, 2},
                                           Case{"two-config-prob-eps", 2, 2}, Case{"forced-flip", 2, 2},
                                           Case{"repeated-entries", 2, 2}, Case{"multi-declare", 2, 3}),
    [](const auto& info) { return test::param_name(info.param.id, info.index); });

TEST(Monitors, ShortCountCaughtWithTrace) {
  const auto v = verify_instance(protocols::mutants::two_switch_short_count(2, 2));
  const auto& m = report_for(v, "two-switch-count");
  EXPECT_FALSE(m.passed);
  ASSERT_TRUE(m.trace);
  EXPECT_FALSE(m.trace->prefix.empty());
}

TEST(Monitors, DroppedSeeCaughtByPhaseMonitor) {
  const auto v = verify_instance(protocols::mutants::prob1_without_see(2, 2));
  const auto& m = report_for(v, "prob1-phase");
  EXPECT_FALSE(m.passed);
  ASSERT_TRUE(m.trace);
}

TEST(Imbalance, SumLedgerHoldsAlongRandomRuns) {
  const auto inst = protocols::two_config_prob_eps(3, 3);
  auto mon = make_monitor("imbalance", inst);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SeededRandom rng(inst.n, inst.r, seed);
    RunOptions o;
    o.max_steps = 500;
    o.monitors = {mon.get()};
    const auto res = run(inst, rng, o);
    EXPECT_TRUE(res.violation.empty()) << res.violation;
  }
}

TEST(Imbalance, ProfileOfFirstPrisoner) {
  const auto inst = protocols::two_config_prob_eps(2, 2);
  const auto p0 = imbalance_profile(inst.programs[0]);
  // startup 2 up, check-down 2, check-up 2, cooldown 3.
  EXPECT_EQ(p0, (std::vector<int>{0, 1, 2, 1, 0, 1, 2, 1, 0, -1}));
  const auto p1 = imbalance_profile(inst.programs[1]);
  EXPECT_EQ(p1, (std::vector<int>{0, 1, 2, 3, 2, 1, 2, 3, 3}));
}

TEST(Imbalance, LiteralPositivityFailsForFirstPrisoner) {
  // Read literally, "positive from the first flip until cooldown" fails for
  // p_0: check-down takes it back to 0 after 2r steps. Later prisoners satisfy it.
  for (std::size_t r : {1u, 2u, 3u, 5u}) {
    const auto inst = protocols::two_config_prob_eps(3, r);
    const auto p0 = imbalance_profile(inst.programs[0]);
    EXPECT_EQ(p0[2 * r], 0) << "r = " << r;
    for (std::size_t k = 1; k < inst.n; ++k) {
      const auto pk = imbalance_profile(inst.programs[k]);
      for (std::size_t s = 1; s <= 3 * r + k; ++s) EXPECT_GT(pk[s], 0) << "k = " << k << " s = " << s;
    }
  }
}

TEST(Ownership, DeclareMonitorOnWinningRun) {
  const auto inst = protocols::two_switch_prisoner_at_a_time(2, 2);
  auto declare_mon = make_monitor("declare-ownership", inst);
  auto finish_mon = make_monitor("finish-ownership", inst);
  RoundRobin rr(2, 2);
  RunOptions o;
  o.monitors = {declare_mon.get(), finish_mon.get()};
  const auto res = run(inst, rr, o);
  EXPECT_EQ(res.outcome.kind, Outcome::Kind::DeclaredCorrect);
  EXPECT_TRUE(res.violation.empty()) << res.violation;
}

TEST(Ownership, DeclareMonitorFlagsMutant) {
  const auto inst = protocols::mutants::two_switch_short_count(2, 2);
  const auto v = verify_instance(inst);
  ASSERT_TRUE(v.report.unsafe);
  auto mon = make_monitor("declare-ownership", inst);
  std::vector<VisitEvent> events;
  for (const auto& rec : v.report.unsafe->prefix) events.push_back({rec.prisoner, rec.room});
  ReplayThenRoundRobin replay(events, inst.n, inst.r);
  RunOptions o;
  o.max_steps = events.size();
  o.monitors = {mon.get()};
  const auto res = run(inst, replay, o);
  EXPECT_EQ(res.outcome.kind, Outcome::Kind::DeclaredIncorrect);
  EXPECT_FALSE(res.violation.empty());
}

}  // namespace
