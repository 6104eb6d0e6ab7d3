#include "lockstep/world.hpp"

#include <algorithm>
#include <stdexcept>

#include "lockstep/monitors.hpp"

namespace lockstep {

bool WorldState::any_declared() const noexcept {
  return std::any_of(prisoners.begin(), prisoners.end(), [](const PrisonerState& p) { return p.declared; });
}

bool WorldState::all_declared() const noexcept {
  return std::all_of(prisoners.begin(), prisoners.end(), [](const PrisonerState& p) { return p.declared; });
}

WorldState initial_state(const ProtocolInstance& instance) {
  WorldState s;
  s.rooms = instance.start;
  s.prisoners.assign(instance.n, PrisonerState{});
  s.visits.assign(instance.n * instance.r, 0);
  return s;
}

bool row_full(const WorldState& state, std::size_t p) {
  for (std::size_t room = 0; room < state.r(); ++room) {
    if (state.visit_count(p, room) == 0) return false;
  }
  return true;
}

bool win_satisfied(const WinCondition& win, const WorldState& state) {
  switch (win.kind) {
    case WinCondition::Kind::AllRoomsAllPrisoners:
      return std::all_of(state.visits.begin(), state.visits.end(),
                         [&](std::uint32_t v) { return v >= win.min_visits; });
    case WinCondition::Kind::AllMustDeclare:
      return std::all_of(state.visits.begin(), state.visits.end(), [](std::uint32_t v) { return v >= 1; });
    case WinCondition::Kind::AtLeastOneRoom:
      for (std::size_t p = 0; p < state.n(); ++p) {
        bool any = false;
        for (std::size_t room = 0; room < state.r(); ++room) any = any || state.visit_count(p, room) > 0;
        if (!any) return false;
      }
      return true;
  }
  return false;
}

StepResult apply_visit(const ProtocolInstance& instance, WorldState& state, VisitEvent event,
                       std::uint32_t visit_cap) {
  if (event.prisoner >= state.n() || event.room >= state.r()) {
    throw std::logic_error("visit event out of range");
  }
  StepResult result;
  result.before = state.rooms[event.room];
  PrisonerState& cursor = state.prisoners[event.prisoner];
  const bool was_declared = cursor.declared;
  auto [next, outcome] = visit(cursor, instance.programs[event.prisoner], result.before);
  cursor = next;
  state.rooms[event.room] = outcome.new_config;
  std::uint32_t& count = state.visits[event.prisoner * state.r() + event.room];
  if (visit_cap == 0 || count < visit_cap) ++count;
  result.outcome = outcome;
  result.declaration = outcome.declared && !was_declared;
  if (result.declaration) result.correct = win_satisfied(instance.win, state);
  return result;
}

TraceRecord make_record(const ProtocolInstance& instance, std::uint64_t step, VisitEvent event,
                        const StepResult& result) {
  return TraceRecord{step,
                     event.prisoner,
                     event.room,
                     instance.config_name(result.before),
                     instance.config_name(result.outcome.new_config),
                     result.outcome.fired,
                     result.declaration};
}

std::vector<TraceRecord> replay(const ProtocolInstance& instance, const std::vector<VisitEvent>& events) {
  WorldState state = initial_state(instance);
  std::vector<TraceRecord> trace;
  trace.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const StepResult result = apply_visit(instance, state, events[i]);
    trace.push_back(make_record(instance, i + 1, events[i], result));
  }
  return trace;
}

std::string to_string(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::DeclaredCorrect: return "declared-correct at step " + std::to_string(o.step);
    case Outcome::Kind::DeclaredIncorrect:
      return "declared-incorrect at step " + std::to_string(o.step) + " by prisoner " + std::to_string(o.prisoner);
    case Outcome::Kind::StepLimit: return "step-limit at step " + std::to_string(o.step);
  }
  return "?";
}

RunResult run(const ProtocolInstance& instance, Scheduler& scheduler, const RunOptions& options) {
  RunResult out;
  out.final_state = initial_state(instance);
  WorldState& state = out.final_state;
  const bool all_declare = instance.win.kind == WinCondition::Kind::AllMustDeclare;

  const auto note_violation = [&](const Monitor& m, const std::optional<std::string>& msg, std::uint64_t step) {
    if (msg && out.violation.empty()) {
      out.violation = std::string(m.id()) + ": " + *msg;
      out.violation_step = step;
    }
  };
  for (Monitor* m : options.monitors) note_violation(*m, m->check_state(state), 0);

  for (std::uint64_t step = 1; step <= options.max_steps; ++step) {
    const VisitEvent event = scheduler.next(WorldView{instance, state, step - 1});
    WorldState before;
    if (!options.monitors.empty()) before = state;
    const StepResult result = apply_visit(instance, state, event);
    scheduler.observe(WorldView{instance, state, step}, event, result);
    if (options.record_trace) out.trace.push_back(make_record(instance, step, event, result));
    for (Monitor* m : options.monitors) {
      note_violation(*m, m->check_edge(before, event, result, state), step);
      note_violation(*m, m->check_state(state), step);
    }
    if (result.declaration) {
      if (!result.correct) {
        out.outcome = Outcome{Outcome::Kind::DeclaredIncorrect, step, event.prisoner};
        return out;
      }
      if (!all_declare || state.all_declared()) {
        out.outcome = Outcome{Outcome::Kind::DeclaredCorrect, step, event.prisoner};
        return out;
      }
    }
  }
  out.outcome = Outcome{Outcome::Kind::StepLimit, options.max_steps, 0};
  return out;
}

}  // namespace lockstep
