#include "lockstep/suite.hpp"

#include <chrono>
#include <random>
#include <sstream>

#include "lockstep/ownership.hpp"
#include "lockstep/protocols.hpp"
#include "lockstep/s1_adversary.hpp"
#include "lockstep/scheduling.hpp"
#include "lockstep/transcript.hpp"

namespace lockstep {

bool Verification::monitors_passed() const {
  return report.monitors_passed() && (!knowledge || knowledge->explore.monitors_passed());
}

bool Verification::resource_limited() const {
  return !report.complete || (knowledge && !knowledge->explore.complete);
}

std::vector<std::unique_ptr<Monitor>> explorer_monitors(const ProtocolInstance& instance) {
  std::vector<std::unique_ptr<Monitor>> out;
  for (const auto& id : monitors_for(instance)) {
    auto m = make_monitor(id, instance);
    if (m->stateless()) out.push_back(std::move(m));
  }
  return out;
}

Verification verify_instance(const ProtocolInstance& instance, ExploreOptions options) {
  const auto monitors = explorer_monitors(instance);
  for (const auto& m : monitors) options.monitors.push_back(m.get());
  Verification v;
  if (instance.guarantee == Guarantee::KnowledgeOnly) {
    v.knowledge = check_knowledge(instance, options);
    v.report = v.knowledge->explore;
    v.claim = v.knowledge->holds();
  } else {
    v.report = explore(instance, options);
    v.claim = conforms(instance.guarantee, v.report);
  }
  return v;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail.str("");
      detail << "FAILED " << what;
    }
  }
  template <class T>
  Check& operator<<(const T& v) {
    if (ok) detail << v;
    return *this;
  }
};

std::string verdicts(const ExploreReport& r) {
  return "safe=" + std::string(to_string(r.safe)) + " live=" + std::string(to_string(r.live)) +
         " prob1=" + std::string(to_string(r.prob1)) + " prob_eps=" + std::string(to_string(r.prob_eps));
}

std::string failed_monitors(const ExploreReport& r) {
  std::string out;
  for (const auto& m : r.monitors) {
    if (!m.passed) out += " " + m.id + ": " + m.message;
  }
  return out;
}

// Explores with the registered monitors; requires safe, the given extra
// verdicts and every monitor passing.
void expect(Check& c, const ProtocolInstance& inst, bool need_live, bool need_prob1, std::uint64_t max_states,
            double limit, std::uint64_t* states = nullptr) {
  const auto t0 = Clock::now();
  const Verification v = verify_instance(inst);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const auto& r = v.report;
  c.require(r.complete, inst.label + " exploration incomplete");
  c.require(r.safe == Verdict::True, inst.label + " not safe: " + verdicts(r));
  if (need_live) c.require(r.live == Verdict::True, inst.label + " not live: " + verdicts(r));
  if (need_prob1) c.require(r.prob1 == Verdict::True, inst.label + " not prob1: " + verdicts(r));
  c.require(v.monitors_passed(), inst.label + " monitor violation:" + failed_monitors(r));
  c.require(r.states <= max_states, inst.label + " explored " + std::to_string(r.states) + " states");
  c.require(secs < limit, inst.label + " took " + std::to_string(secs) + " s");
  if (states) *states += r.states;
}

std::string monitor_list(const ProtocolInstance& inst) {
  std::string out;
  for (const auto& m : explorer_monitors(inst)) out += (out.empty() ? "" : ",") + std::string(m->id());
  return out;
}

void criterion1(Check& c) {
  std::uint64_t states = 0;
  for (std::size_t n : {1, 2, 3, 5}) expect(c, protocols::one_room_known(n), true, false, 10'000'000, 1, &states);
  c << "one-room-known n in {1,2,3,5} safe and live, " << states << " states";
}

void criterion2(Check& c) {
  std::uint64_t states = 0;
  for (std::size_t n : {2, 3}) {
    for (unsigned s : {0u, 1u}) expect(c, protocols::one_room_unknown(n, config(s)), true, false, 10'000'000, 1, &states);
  }
  c << "one-room-unknown n in {2,3}, start OFF and ON, safe and live, " << states << " states";
}

void criterion3(Check& c) {
  std::uint64_t states = 0;
  for (std::size_t n : {2, 3}) {
    for (std::size_t r : {2, 3}) {
      const auto inst = protocols::two_switch_prisoner_at_a_time(n, r);
      expect(c, inst, true, false, 10'000'000, 60, &states);
    }
  }
  c << "two-switch-prisoner (n,r) in {2,3}x{2,3} safe and live; monitors "
    << monitor_list(protocols::two_switch_prisoner_at_a_time(2, 2)) << " pass; " << states << " states";
}

void criterion4(Check& c) {
  std::uint64_t states = 0;
  for (std::size_t n : {2, 3}) {
    expect(c, protocols::room_at_a_time_six(n, 3), true, false, 10'000'000, 60, &states);
    expect(c, protocols::two_switch_room_at_a_time(n, 3), true, false, 10'000'000, 60, &states);
  }
  c << "room-at-a-time-six and two-switch-room at n in {2,3}, r=3 safe and live; done-stable and room-phase pass; "
    << states << " states";
}

void criterion5(Check& c) {
  const auto base = protocols::two_switch_prisoner_at_a_time(2, 2);
  std::uint64_t states = 0;
  std::size_t cases = 0;
  for (unsigned a = 0; a < 4; ++a) {
    for (unsigned b = 0; b < 4; ++b) {
      const std::vector<Config> start{config(a), config(b)};
      expect(c, protocols::arbitrary_start_wrapper(base, start), true, false, 10'000'000, 300, &states);
      ++cases;
    }
  }
  c << cases << " start assignments of two-switch-prisoner(2,2) wrapped, all safe and live, " << states << " states";
}

void criterion6(Check& c) {
  const auto base = protocols::two_switch_prisoner_at_a_time(2, 2);
  const SchedulePair pair = build_schedule_pair(base);
  const auto inst = with_start(base, pair.start);
  RunOptions opt;
  opt.max_steps = 500;
  auto s1 = pair.s1(inst.n);
  auto s2 = pair.s2(inst.n);
  const auto r1 = run(inst, *s1, opt);
  const auto r2 = run(inst, *s2, opt);
  const auto logs1 = observation_logs(r1.trace, inst.n), logs2 = observation_logs(r2.trace, inst.n);
  c.require(r1.trace.size() == 500 && logs1 == logs2, "observation logs differ within 500 events");
  c.require(s2->advances() >= inst.r, "s2 pointer advanced only " + std::to_string(s2->advances()) + " times");

  opt.max_steps = 10'000;
  auto long1 = pair.s1(inst.n);
  const auto under_s1 = run(inst, *long1, opt);
  std::string branch;
  if (under_s1.outcome.kind != Outcome::Kind::StepLimit) {
    auto valid = extend_to_valid(events_of(under_s1.trace), under_s1.outcome.step, inst.n, inst.r);
    const auto extended = run(inst, *valid, opt);
    c.require(extended.outcome.kind == Outcome::Kind::DeclaredIncorrect &&
                  extended.outcome.step == under_s1.outcome.step,
              "extended s1 did not declare incorrectly at the s1 declaration step");
    branch = "incorrect declaration under extended s1 at step " + std::to_string(extended.outcome.step);
  } else {
    auto long2 = pair.s2(inst.n);
    const auto under_s2 = run(inst, *long2, opt);
    c.require(under_s2.outcome.kind == Outcome::Kind::StepLimit, "s2 run declared within 10^4 steps");
    branch = "no declaration under s1 or s2 within 10^4 steps (s2 moved rooms " + std::to_string(long2->advances()) +
             " times)";
  }
  c << "start (" << inst.config_name(pair.start[0]) << "," << inst.config_name(pair.recurrence.d)
    << "), logs identical for 500 events, " << branch;
}

void criterion7(Check& c) {
  const std::vector<ProtocolInstance> strategies{
      protocols::one_room_known(2, 5), protocols::one_room_unknown(2, config(0), 5), protocols::at_least_one_room(2, 5),
      protocols::two_config_prob_eps(2, 5)};
  std::string summary;
  for (const auto& inst : strategies) {
    const auto t0 = Clock::now();
    const S1Demo demo = run_s1_demo(inst, 10'000);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    c.require(demo.defeated(), inst.label + " reached a declaration no schedule refutes: " + to_string(demo.outcome));
    c.require(!demo.invariant_violation, inst.label + ": " + demo.invariant_violation.value_or(""));
    c.require(demo.fair, inst.label + " failed the direct-extension fairness audit");
    c.require(secs < 30, inst.label + " took " + std::to_string(secs) + " s");
    summary += " " + inst.family + ":";
    if (demo.outcome.kind == Outcome::Kind::DeclaredCorrect) {
      summary += "refuted@" + std::to_string(demo.outcome.step);
    } else if (demo.outcome.kind == Outcome::Kind::DeclaredIncorrect) {
      summary += "incorrect@" + std::to_string(demo.outcome.step);
    } else {
      summary += "silent";
    }
  }

  std::mt19937_64 rng(20240601);
  std::size_t agreed = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Config> start(5);
    for (auto& s : start) s = config(static_cast<unsigned>(rng() % 2));
    OwnershipTable table(2, 2, start);
    std::vector<Config> rooms = start;
    std::vector<ObservedEvent> history;
    const std::size_t len = rng() % 13;
    for (std::size_t t = 0; t < len; ++t) {
      const std::size_t room = rng() % 5;
      const ObservedEvent e{static_cast<std::size_t>(rng() % 2), rooms[room], config(static_cast<unsigned>(rng() % 2))};
      rooms[room] = e.out;
      history.push_back(e);
      table.apply(e);
    }
    agreed += table.matrix() == provable_ownership_bruteforce(start, history, 2, 2);
  }
  c.require(agreed == 1000, "apply_event disagreed with the brute-force oracle on " + std::to_string(1000 - agreed) +
                                " histories");
  c << "n=2 r=5, 10^4 events;" << summary << "; case invariant and fairness audit hold; ownership oracle agreed on "
    << agreed << "/1000 histories";
}

void criterion8(Check& c) {
  const auto inst = protocols::three_config_prob1(2, 2);
  std::uint64_t states = 0;
  expect(c, inst, false, true, 10'000'000, 300, &states);
  c << "prob1-3config(2,2) safe and prob1; prob1-phase passes; " << states << " states";
}

void criterion9(Check& c) {
  const auto inst = protocols::two_config_prob_eps(2, 2);
  const Verification v = verify_instance(inst);
  const auto& r = v.report;
  c.require(r.complete && r.safe == Verdict::True && r.prob_eps == Verdict::True && r.prob1 == Verdict::False,
            "two-config-prob-eps(2,2): " + verdicts(r));
  c.require(v.monitors_passed(), "imbalance ledger violated:" + failed_monitors(r));
  c.require(r.seconds < 300, "exploration too slow");
  ReplayThenRoundRobin witness(prob_eps_witness(inst.n, inst.r), inst.n, inst.r);
  const auto w = run(inst, witness, RunOptions{});
  c.require(w.outcome.kind == Outcome::Kind::DeclaredCorrect, "witness schedule: " + to_string(w.outcome));
  c << "two-config-prob-eps(2,2) safe, prob_eps, not prob1 (stuck after " << (r.stuck ? r.stuck->prefix.size() : 0)
    << " events); witness " << to_string(w.outcome) << "; imbalance ledger holds on " << r.states << " states";
}

void criterion10(Check& c) {
  for (std::size_t n : {2, 3}) expect(c, protocols::two_rooms_three_configs(n), true, false, 10'000'000, 600);

  const auto knowledge = check_knowledge(protocols::three_config_knowledge(2, 2));
  c.require(knowledge.holds() == Verdict::True, "knowledge-3config(2,2) fails check_knowledge");

  const auto rr = run_transcript(3, std::vector<Transcript>(3),
                                 [](std::uint64_t t) { return VisitEvent{t % 3, (t / 3) % 3}; }, 90);
  c.require(rr.declared && rr.correct, "transcript protocol did not declare correctly within 90 visits");
  const auto search = exhaustive_transcript_search(2, 2, 3, 2, 7);
  c.require(search.incorrect == 0 && search.declarations > 0, "transcript bounded search found an incorrect declaration");

  bool even_rejected = false;
  try {
    (void)protocols::with_multiple_declarations(protocols::two_switch_room_at_a_time(2, 2));
  } catch (const UnsupportedParameter&) {
    even_rejected = true;
  }
  c.require(even_rejected, "multi-declare accepted r=2");
  expect(c, protocols::with_multiple_declarations(protocols::two_switch_room_at_a_time(2, 3)), true, false,
         10'000'000, 600);
  for (std::size_t r : {2, 3}) {
    expect(c, protocols::with_repeated_entries(protocols::two_switch_prisoner_at_a_time(2, r), 2), true, false,
           10'000'000, 600);
    expect(c, protocols::forced_flip_transform(protocols::two_switch_prisoner_at_a_time(2, r)), true, false,
           10'000'000, 600);
  }
  c << "two-rooms-3config n in {2,3} safe and live; knowledge-3config(2,2) knows and eventually; transcript "
       "round-robin n=3 r=3 declares correctly at visit "
    << rr.step << ", bounded search (" << search.prefix_sets << " prefix sets, depth 7) " << search.declarations
    << " declarations, 0 incorrect; multi-declare r=3 (r=2 rejected), repeated-entries ell=2 and forced-flip at "
       "n=2 r in {2,3} safe and live";
}

void criterion11(Check& c) {
  const auto count = protocols::mutants::two_switch_short_count(2, 2);
  const Verification vc = verify_instance(count);
  const bool count_caught = vc.report.safe == Verdict::False || !vc.monitors_passed();
  c.require(count_caught && vc.report.unsafe && !vc.report.unsafe->prefix.empty(),
            "short-count mutant not caught with a trace");

  const auto see = protocols::mutants::prob1_without_see(2, 2);
  const Verification vs = verify_instance(see);
  const MonitorReport* phase = nullptr;
  for (const auto& m : vs.report.monitors) {
    if (m.id == "prob1-phase") phase = &m;
  }
  c.require(phase && !phase->passed && phase->trace && !phase->trace->prefix.empty(),
            "drop-see mutant not caught by prob1-phase with a trace");

  const auto prep = protocols::mutants::knowledge_without_prepend(2, 2);
  const auto kp = check_knowledge(prep);
  c.require(kp.holds() == Verdict::False && kp.counterexample, "drop-prepend mutant passes check_knowledge");

  std::string count_monitor;
  for (const auto& m : vc.report.monitors) {
    if (!m.passed) count_monitor = m.id;
  }
  c << "short-count: unsafe (" << vc.report.unsafe->prefix.size() << "-event trace)"
    << (count_monitor.empty() ? "" : ", " + count_monitor + " fails") << "; drop-see: prob1-phase fails ("
    << (phase && phase->trace ? phase->trace->prefix.size() : 0) << "-event trace: " << (phase ? phase->message : "")
    << "); drop-prepend: check_knowledge fails (" << (kp.counterexample ? kp.counterexample->prefix.size() : 0)
    << "-event prefix, " << (kp.counterexample ? kp.counterexample->cycle.size() : 0) << "-event cycle)";
}

struct Spec {
  int id;
  const char* title;
  double limit;
  void (*body)(Check&);
};

const Spec kCriteria[] = {
    {1, "one-room correctness", 1, criterion1},
    {2, "unknown-start one-room", 1, criterion2},
    {3, "two-switch theorem", 4 * 60, criterion3},
    {4, "room-at-a-time protocols", 60, criterion4},
    {5, "arbitrary-start reduction", 300, criterion5},
    {6, "impossibility demonstrations", 10, criterion6},
    {7, "s = 1 impossibility", 4 * 30 + 60, criterion7},
    {8, "probability-1", 300, criterion8},
    {9, "probability-epsilon", 300, criterion9},
    {10, "corner cases", 600, criterion10},
    {11, "mutation sensitivity", 300, criterion11},
};

}  // namespace

std::vector<int> acceptance_ids() {
  std::vector<int> ids;
  for (const auto& s : kCriteria) ids.push_back(s.id);
  return ids;
}

CriterionResult run_criterion(int id) {
  for (const auto& s : kCriteria) {
    if (s.id != id) continue;
    CriterionResult out{id, s.title, false, {}, 0, s.limit};
    Check c;
    const auto t0 = Clock::now();
    try {
      s.body(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    c.require(out.seconds < s.limit, "over the time limit");
    out.passed = c.ok;
    out.detail = c.detail.str();
    return out;
  }
  throw UnknownId("unknown acceptance criterion " + std::to_string(id));
}

std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id : acceptance_ids()) {
    out.push_back(run_criterion(id));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r, bool timings) {
  std::ostringstream os;
  os << "criterion " << r.id << " " << (r.passed ? "PASS" : "FAIL") << " " << r.title << ": " << r.detail;
  if (timings) os << " [" << r.seconds << " s, limit " << r.limit_seconds << " s]";
  return os.str();
}

}  // namespace lockstep
