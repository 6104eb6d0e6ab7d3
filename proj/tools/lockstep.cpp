// lockstep: simulate protocols, verify guarantees, run the adversaries.
//
// Exit codes: 0 success; 2 incorrect declaration; 3 step limit reached;
// 64 usage error; 65 a claimed guarantee or check failed; 70 resource limit.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <iostream>
#include <random>
#include <optional>

#include "lockstep/monitors.hpp"
#include "lockstep/registry.hpp"
#include "lockstep/s1_adversary.hpp"
#include "lockstep/scheduling.hpp"
#include "lockstep/suite.hpp"
#include "lockstep/trace.hpp"
#include "lockstep/transcript.hpp"
#include "lockstep/verifier.hpp"

namespace {

using namespace lockstep;

constexpr int kOk = 0, kIncorrect = 2, kStepLimit = 3, kUsage = 64, kMismatch = 65, kResource = 70;

struct Options {
  std::string protocol;
  std::size_t n = 2;
  std::optional<std::size_t> r;
  std::uint32_t ell = 1;
  std::optional<std::string> start;
  std::string scheduler = "round-robin";
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 10'000;
  std::string win = "default";
  std::string format = "text";
  bool symmetry = false;
  std::uint64_t node_cap = 0;
  std::vector<std::string> monitors;
  std::string suite;
  std::uint64_t horizon = 500;
  bool timings = false;
  bool show_trace = false;
};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void add_protocol_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--protocol", o.protocol, "Protocol id (see `lockstep list`)");
  cmd->add_option("--n", o.n, "Number of prisoners")->check(CLI::PositiveNumber);
  cmd->add_option("--r", o.r, "Number of rooms")->check(CLI::PositiveNumber);
  cmd->add_option("--ell", o.ell, "Visits owed per (prisoner, room) for repeated-entries")->check(CLI::PositiveNumber);
  cmd->add_option("--start", o.start, "Start configurations, comma separated or one for all rooms");
  cmd->add_option("--win", o.win, "Win condition override")
      ->check(CLI::IsMember({"default", "all-rooms", "at-least-one-room", "all-declare"}));
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "jsonl"}));
}

ProtocolInstance build(const Options& o) {
  if (o.protocol.empty()) throw UsageError("--protocol is required");
  ProtocolInstance inst = make_protocol(o.protocol, ProtocolParams{o.n, o.r, o.ell, o.start});
  if (o.win == "all-rooms") inst.win = WinCondition::all_rooms(o.ell);
  if (o.win == "at-least-one-room") inst.win = WinCondition::at_least_one_room();
  if (o.win == "all-declare") inst.win = WinCondition::all_declare();
  return inst;
}

std::vector<std::unique_ptr<Monitor>> requested_monitors(const Options& o, const ProtocolInstance& inst) {
  std::vector<std::unique_ptr<Monitor>> out;
  for (const auto& id : o.monitors) out.push_back(make_monitor(id, inst));
  return out;
}

int simulate_transcript(const Options& o) {
  const std::size_t r = o.r.value_or(o.n);
  std::function<VisitEvent(std::uint64_t)> schedule;
  if (o.scheduler == "round-robin") {
    schedule = [n = o.n, r](std::uint64_t t) { return VisitEvent{t % n, (t / n) % r}; };
  } else if (o.scheduler == "random") {
    auto rng = std::make_shared<std::mt19937_64>(o.seed);
    schedule = [rng, n = o.n, r](std::uint64_t) {
      const std::uint64_t v = (*rng)() % (n * r);
      return VisitEvent{static_cast<std::size_t>(v / r), static_cast<std::size_t>(v % r)};
    };
  } else {
    throw UsageError("the transcript protocol runs under round-robin or random only");
  }
  const auto run = run_transcript(o.n, std::vector<Transcript>(r), schedule, o.max_steps, true);
  for (const auto& line : run.log) std::cout << line << '\n';
  if (!run.declared) {
    std::cout << "outcome: step-limit at step " << run.step << '\n';
    return kStepLimit;
  }
  std::cout << "outcome: declared-" << (run.correct ? "correct" : "incorrect") << " at step " << run.step << '\n';
  return run.correct ? kOk : kIncorrect;
}

int cmd_simulate(const Options& o) {
  if (o.protocol == "transcript") return simulate_transcript(o);
  ProtocolInstance inst = build(o);
  auto scheduler = make_scheduler(o.scheduler, inst, o.seed);
  const auto monitors = requested_monitors(o, inst);
  RunOptions ro;
  ro.max_steps = o.max_steps;
  for (const auto& m : monitors) ro.monitors.push_back(m.get());
  const RunResult res = run(inst, *scheduler, ro);
  write_trace(std::cout, res.trace, o.format == "jsonl" ? TraceFormat::Jsonl : TraceFormat::Text);
  std::ostream& summary = o.format == "jsonl" ? std::cerr : std::cout;
  summary << "outcome: " << to_string(res.outcome) << '\n';
  if (!res.violation.empty()) summary << "monitor violation at step " << res.violation_step << ": " << res.violation << '\n';
  switch (res.outcome.kind) {
    case Outcome::Kind::DeclaredCorrect: return kOk;
    case Outcome::Kind::DeclaredIncorrect: return kIncorrect;
    case Outcome::Kind::StepLimit: return kStepLimit;
  }
  return kStepLimit;
}

void print_counterexample(const char* what, const std::optional<Counterexample>& cx) {
  if (!cx) return;
  std::cout << what << ":\n";
  for (const auto& t : cx->prefix) std::cout << "  " << to_text(t) << '\n';
  if (!cx->cycle.empty()) {
    std::cout << "  repeat forever:\n";
    for (const auto& t : cx->cycle) std::cout << "    " << to_text(t) << '\n';
  }
}

int cmd_verify_suite(const Options& o) {
  if (o.suite != "acceptance") throw UsageError("unknown suite '" + o.suite + "'");
  bool all = true;
  run_acceptance([&](const CriterionResult& r) {
    std::cout << format_result(r, o.timings) << std::endl;
    all = all && r.passed;
  });
  return all ? kOk : kMismatch;
}

int cmd_verify(const Options& o) {
  if (!o.suite.empty()) return cmd_verify_suite(o);
  ProtocolInstance inst = build(o);
  ExploreOptions eo;
  eo.node_cap = o.node_cap;
  eo.symmetry = o.symmetry;
  // Explicitly requested monitors run in addition to the registered ones.
  auto extra = requested_monitors(o, inst);
  for (const auto& m : extra) {
    if (!m->stateless()) throw UsageError("invariant '" + std::string(m->id()) + "' only runs on single simulations");
    const auto registered = monitors_for(inst);
    if (std::find(registered.begin(), registered.end(), std::string(m->id())) == registered.end()) {
      eo.monitors.push_back(m.get());
    }
  }
  const Verification v = verify_instance(inst, eo);
  const ExploreReport& rep = v.report;
  std::vector<std::pair<std::string, Verdict>> props{
      {"safe", rep.safe}, {"live", rep.live}, {"prob1", rep.prob1}, {"prob_eps", rep.prob_eps}};
  if (v.knowledge) {
    props.emplace_back("knows", v.knowledge->knows);
    props.emplace_back("eventually_knows", v.knowledge->eventually);
  }
  for (const auto& m : rep.monitors) props.emplace_back("invariant:" + m.id, verdict(m.passed));
  props.emplace_back("claim:" + std::string(to_string(inst.guarantee)), v.claim);

  if (o.format == "jsonl") {
    for (const auto& [name, value] : props) {
      nlohmann::ordered_json j;
      j["protocol"] = inst.family;
      j["label"] = inst.label;
      j["n"] = inst.n;
      j["r"] = inst.r;
      j["property"] = name;
      j["verdict"] = to_string(value);
      j["states_explored"] = rep.states;
      j["max_depth"] = rep.max_depth;
      std::cout << j.dump() << '\n';
    }
  } else {
    std::cout << inst.label << ": " << rep.states << " states, " << rep.edges << " edges, max depth " << rep.max_depth
              << (rep.complete ? "" : " (incomplete)") << '\n';
    for (const auto& [name, value] : props) std::cout << "  " << name << " = " << to_string(value) << '\n';
    if (rep.prob1_bound) std::cout << "  prob1 bound = " << *rep.prob1_bound << '\n';
    std::cout << "  strongest class = " << to_string(strongest_class(rep)) << '\n';
    for (const auto& m : rep.monitors) {
      if (!m.passed) {
        std::cout << "invariant " << m.id << " violated: " << m.message << '\n';
        print_counterexample("trace", m.trace);
      }
    }
    print_counterexample("unsafe", rep.unsafe);
    print_counterexample("stuck", rep.stuck);
    print_counterexample("fair lasso avoiding the goal", rep.unlive);
    if (v.knowledge) print_counterexample("knowledge counterexample", v.knowledge->counterexample);
    if (o.timings) std::cout << "  seconds = " << rep.seconds << '\n';
  }
  if (v.claim == Verdict::True && v.monitors_passed()) return kOk;
  if (v.claim == Verdict::Unknown && v.resource_limited()) return kResource;
  return kMismatch;
}

int cmd_lemma1(const Options& o) {
  ProtocolInstance base = build(o);
  const SchedulePair pair = build_schedule_pair(base);
  const ProtocolInstance inst = with_start(base, pair.start);
  RunOptions ro;
  ro.max_steps = o.horizon;
  auto s1 = pair.s1(inst.n);
  auto s2 = pair.s2(inst.n);
  const auto r1 = run(inst, *s1, ro);
  const auto r2 = run(inst, *s2, ro);
  const bool same = observation_logs(r1.trace, inst.n) == observation_logs(r2.trace, inst.n);
  std::cout << "start:";
  for (Config c : pair.start) std::cout << ' ' << inst.config_name(c);
  std::cout << "\nrecurring configuration D = " << inst.config_name(pair.recurrence.d) << " (cycle of "
            << pair.recurrence.cycle_length << " passes after pass " << pair.recurrence.first_pass << ")\n";
  std::cout << "observation logs over " << r1.trace.size() << " and " << r2.trace.size()
            << " events: " << (same ? "identical" : "DIFFERENT") << "; s2 changed rooms " << s2->advances()
            << " times\n";
  if (o.show_trace) {
    std::cout << "s1:\n";
    write_trace(std::cout, r1.trace, o.format == "jsonl" ? TraceFormat::Jsonl : TraceFormat::Text);
    std::cout << "s2:\n";
    write_trace(std::cout, r2.trace, o.format == "jsonl" ? TraceFormat::Jsonl : TraceFormat::Text);
  }
  ro.max_steps = o.max_steps;
  auto long1 = pair.s1(inst.n);
  const auto under_s1 = run(inst, *long1, ro);
  if (under_s1.outcome.kind != Outcome::Kind::StepLimit) {
    auto valid = extend_to_valid(events_of(under_s1.trace), under_s1.outcome.step, inst.n, inst.r);
    const auto ext = run(inst, *valid, ro);
    std::cout << "s1 declares at step " << under_s1.outcome.step << "; extended to a valid schedule: "
              << to_string(ext.outcome) << '\n';
  } else {
    auto long2 = pair.s2(inst.n);
    const auto under_s2 = run(inst, *long2, ro);
    std::cout << "no declaration under s1 within " << o.max_steps << " steps; under s2: " << to_string(under_s2.outcome)
              << '\n';
  }
  return same ? kOk : kMismatch;
}

int cmd_s1(const Options& o) {
  const ProtocolInstance inst = build(o);
  const S1Demo demo = run_s1_demo(inst, o.max_steps);
  if (o.show_trace) write_trace(std::cout, demo.trace, o.format == "jsonl" ? TraceFormat::Jsonl : TraceFormat::Text);
  std::cout << inst.label << " under the s=1 adversary: " << to_string(demo.outcome) << '\n';
  std::cout << "direct extensions " << demo.direct << ", routed visits " << demo.routed << ", fairness audit "
            << (demo.fair ? "passed" : "FAILED") << ", case invariant "
            << (demo.invariant_violation ? "VIOLATED: " + *demo.invariant_violation : std::string("held")) << '\n';
  if (demo.alternative) {
    std::cout << "same observed history with prisoner " << demo.alternative->prisoner << " never in room "
              << demo.alternative->room << ": " << to_string(demo.alternative_outcome) << '\n';
  }
  std::cout << (demo.defeated() ? "protocol failed to win" : "protocol was not defeated") << '\n';
  return demo.defeated() && !demo.invariant_violation && demo.fair ? kOk : kMismatch;
}

int cmd_list() {
  std::cout << "protocols:";
  for (const auto& id : protocol_ids()) std::cout << ' ' << id;
  std::cout << " transcript\nschedulers:";
  for (const auto& id : scheduler_ids()) std::cout << ' ' << id;
  std::cout << "\ninvariants:";
  for (const auto& id : monitor_ids()) std::cout << ' ' << id;
  std::cout << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lockstep: prisoners-and-lightswitches simulator and model checker"};
  app.footer("Exit codes: 0 ok, 2 incorrect declaration, 3 step limit, 64 usage error, 65 verdict mismatch, "
             "70 resource limit. LOCKSTEP_NODE_CAP overrides the default node cap.");
  app.require_subcommand(1);
  Options o;

  auto* sim = app.add_subcommand("simulate", "Run one schedule and print the trace");
  add_protocol_flags(sim, o);
  sim->add_option("--scheduler", o.scheduler, "Scheduler id");
  sim->add_option("--seed", o.seed, "Seed for the random scheduler");
  sim->add_option("--max-steps", o.max_steps, "Step limit");
  sim->add_option("--monitor", o.monitors, "Invariant to check along the run (repeatable)");

  auto* ver = app.add_subcommand("verify", "Explore every schedule and check the claimed guarantee");
  add_protocol_flags(ver, o);
  ver->add_option("--suite", o.suite, "Run a named suite instead (acceptance)");
  ver->add_flag("--symmetry", o.symmetry, "Quotient by permutations of equally started rooms");
  ver->add_option("--node-cap", o.node_cap, "Maximum number of explored states");
  ver->add_option("--monitor", o.monitors, "Extra invariant to check (repeatable)");
  ver->add_flag("--timings", o.timings, "Print wall-clock timings");

  auto* adv = app.add_subcommand("adversary", "Run an adversarial construction");
  adv->require_subcommand(1);
  auto* lemma1 = adv->add_subcommand("lemma1", "Indistinguishable single-room and valid schedules");
  add_protocol_flags(lemma1, o);
  lemma1->add_option("--horizon", o.horizon, "Events compared between the two schedules");
  lemma1->add_option("--max-steps", o.max_steps, "Step limit for the dichotomy runs");
  lemma1->add_flag("--show-trace", o.show_trace, "Print both traces");
  auto* s1 = adv->add_subcommand("s1", "The single-switch adversary (m = 2, r >= 5)");
  add_protocol_flags(s1, o);
  s1->add_option("--max-steps", o.max_steps, "Step limit");
  s1->add_flag("--show-trace", o.show_trace, "Print the trace");

  auto* list = app.add_subcommand("list", "List protocol, scheduler and invariant ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(o);
    if (ver->parsed()) return cmd_verify(o);
    if (lemma1->parsed()) return cmd_lemma1(o);
    if (s1->parsed()) return cmd_s1(o);
    if (list->parsed()) return cmd_list();
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const std::invalid_argument& e) {
    // UnknownId, UnsupportedParameter, ConstructionError and bad flag values.
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
