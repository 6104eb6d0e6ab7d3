#include "lockstep/s1_adversary.hpp"

#include <algorithm>

#include "lockstep/scheduling.hpp"

namespace lockstep {

S1Adversary::S1Adversary(const ProtocolInstance& inst)
    : inst_(inst), n_(inst.n), r_(inst.r), table_(inst.n, inst.m, inst.start), last_(inst.n * inst.r, -1) {
  if (inst.m != 2) throw UnsupportedParameter("the s=1 adversary needs exactly two configurations");
  if (inst.n < 2 || inst.r < 5) throw UnsupportedParameter("the s=1 adversary needs n >= 2 and r >= 5");
  for (const auto& p : inst.programs) graphs_.emplace_back(p);
}

bool S1Adversary::finished(const WorldState& s, std::size_t p) const {
  const auto id = graphs_[p].find(graphs_[p].normalize(s.prisoners[p]));
  return id && !graphs_[p].can_act(*id);
}

std::size_t S1Adversary::owners_of_nonempty() const {
  std::size_t k = 0;
  for (std::size_t p = 0; p < n_; ++p) {
    for (std::uint16_t c = 0; c < 2; ++c) k += table_.count(config(c)) > 0 && table_.owns(p, config(c));
  }
  return k;
}

VisitEvent S1Adversary::next(const WorldView& view) {
  if (!pending_.empty()) {
    const VisitEvent e = pending_.back();
    pending_.pop_back();
    return e;
  }
  const WorldState& s = view.state;
  bool any_finished = false;
  for (std::size_t p = 0; p < n_ && !any_finished; ++p) any_finished = finished(s, p);
  const bool lopsided = table_.count(config(0)) + 1 >= r_ || table_.count(config(1)) + 1 >= r_;

  if (!any_finished && !lopsided && owners_of_nonempty() == 1) {
    for (std::uint16_t c = 0; c < 2; ++c) {
      if (table_.count(config(c)) != 2) continue;
      std::size_t owner = n_;
      for (std::size_t p = 0; p < n_; ++p) {
        if (table_.owns(p, config(c))) owner = p;
      }
      if (owner == n_) continue;
      const std::size_t other = owner == 0 ? 1 : 0;
      const CursorGraph& g = graphs_[other];
      const auto node = g.find(g.normalize(s.prisoners[other]));
      const Config allowed[] = {config(0), config(1)};
      const auto word = node ? g.forcing_word(*node, allowed) : std::nullopt;
      if (!word) break;
      // Non-final letters leave rooms unchanged, so the room choice stays valid.
      std::vector<std::int64_t> mine(last_.begin() + static_cast<std::ptrdiff_t>(other * r_),
                                     last_.begin() + static_cast<std::ptrdiff_t>((other + 1) * r_));
      std::vector<VisitEvent> route;
      std::int64_t clock = static_cast<std::int64_t>(events_.size());
      for (Config x : *word) {
        std::size_t best = r_;
        for (std::size_t room = 0; room < r_; ++room) {
          if (s.rooms[room] != x) continue;
          if (best == r_ || mine[room] < mine[best]) best = room;
        }
        mine[best] = clock++;
        route.push_back({other, best});
      }
      routed_ += route.size();
      pending_.assign(route.rbegin(), route.rend());
      const VisitEvent e = pending_.back();
      pending_.pop_back();
      return e;
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < last_.size(); ++i) {
    if (last_[i] < last_[best]) best = i;
  }
  direct_.push_back(events_.size());
  return {best / r_, best % r_};
}

void S1Adversary::observe(const WorldView& after, VisitEvent e, const StepResult& result) {
  last_[e.prisoner * r_ + e.room] = static_cast<std::int64_t>(events_.size());
  events_.push_back(e);
  table_.apply(ObservedEvent{e.prisoner, result.before, result.outcome.new_config});
  check_cases(after.state, after.step);
}

void S1Adversary::check_cases(const WorldState& s, std::uint64_t step) {
  const auto owns_nonempty = [&](std::size_t p, std::uint16_t c) {
    return table_.count(config(c)) > 0 && table_.owns(p, config(c));
  };
  const auto owners = [&](std::uint16_t c) {
    std::size_t k = 0;
    for (std::size_t p = 0; p < n_; ++p) k += owns_nonempty(p, c);
    return k;
  };
  const std::size_t total = owners_of_nonempty();
  int holding = 0;
  // 1: a configuration with at most one room whose complement nobody provably owns.
  bool one = false;
  for (std::uint16_t c = 0; c < 2; ++c) one = one || (table_.count(config(c)) <= 1 && owners(1 - c) == 0);
  holding += one;
  // 2: both configurations have two or more rooms and nobody owns anything.
  holding += table_.count(config(0)) >= 2 && table_.count(config(1)) >= 2 && total == 0;
  // 3: a two-room configuration owned by exactly one prisoner, nothing else owned.
  bool three = false;
  for (std::uint16_t c = 0; c < 2; ++c) three = three || (table_.count(config(c)) == 2 && owners(c) == 1 && total == 1);
  holding += three;
  // 4: some prisoner is finished.
  bool four = false;
  for (std::size_t p = 0; p < n_ && !four; ++p) four = finished(s, p);
  holding += four;
  if (holding > 1) ++overlaps_;
  if (holding == 0 && !violation_) violation_ = "no case condition holds after step " + std::to_string(step);
}

bool S1Adversary::fairness_audit() const {
  const std::size_t block = n_ * r_;
  for (std::size_t b = 0; b + block <= direct_.size() && direct_[b + block - 1] < events_.size(); b += block) {
    std::vector<std::uint8_t> seen(block, 0);
    for (std::uint64_t i = direct_[b]; i <= direct_[b + block - 1]; ++i) {
      seen[events_[i].prisoner * r_ + events_[i].room] = 1;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return false;
  }
  return true;
}

bool S1Demo::defeated() const {
  switch (outcome.kind) {
    case Outcome::Kind::StepLimit:
    case Outcome::Kind::DeclaredIncorrect: return true;
    case Outcome::Kind::DeclaredCorrect:
      return alternative && alternative_outcome.kind == Outcome::Kind::DeclaredIncorrect &&
             alternative_outcome.step == outcome.step;
  }
  return false;
}

S1Demo run_s1_demo(const ProtocolInstance& instance, std::uint64_t max_steps) {
  ProtocolInstance inst = instance;
  inst.win = WinCondition::all_rooms();
  S1Demo demo;
  S1Adversary adversary(inst);
  RunOptions options;
  options.max_steps = max_steps;
  RunResult result = run(inst, adversary, options);
  demo.outcome = result.outcome;
  demo.direct = adversary.direct_extensions();
  demo.routed = adversary.routed_visits();
  demo.invariant_violation = adversary.invariant_violation();
  demo.overlapping_cases = adversary.overlapping_cases();
  demo.fair = adversary.fairness_audit();
  demo.trace = std::move(result.trace);
  if (demo.outcome.kind != Outcome::Kind::DeclaredCorrect) return demo;

  std::vector<ObservedEvent> history;
  for (const auto& t : demo.trace) {
    history.push_back({t.prisoner, inst.parse_config(t.config_before), inst.parse_config(t.config_after)});
  }
  demo.alternative = find_unvisited_realization(inst.start, history, inst.n);
  if (!demo.alternative) return demo;
  std::vector<VisitEvent> events;
  for (std::size_t t = 0; t < history.size(); ++t) events.push_back({history[t].prisoner, demo.alternative->rooms[t]});
  ReplayThenRoundRobin replay(std::move(events), inst.n, inst.r);
  RunOptions replay_options;
  replay_options.max_steps = demo.outcome.step;
  replay_options.record_trace = false;
  demo.alternative_outcome = run(inst, replay, replay_options).outcome;
  return demo;
}

}  // namespace lockstep
