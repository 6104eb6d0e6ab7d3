#include "lockstep/monitors.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "lockstep/ownership.hpp"

namespace lockstep {
namespace {

bool has_transform(const ProtocolInstance& inst, std::string_view t) {
  return std::find(inst.transforms.begin(), inst.transforms.end(), t) != inst.transforms.end();
}

bool only_transforms(const ProtocolInstance& inst, std::initializer_list<std::string_view> allowed) {
  return std::all_of(inst.transforms.begin(), inst.transforms.end(), [&](const std::string& t) {
    return t.rfind("mutant-", 0) == 0 || std::find(allowed.begin(), allowed.end(), t) != allowed.end();
  });
}

// Note of the instruction under the cursor; empty at the end of the program.
const std::string& note_at(const Program& p, const PrisonerState& s) {
  static const std::string kEnd;
  return p.at_end(s) ? kEnd : p.leaf_at(s.step).note;
}

std::string who(std::size_t p) { return "prisoner " + std::to_string(p); }

// ---------------------------------------------------------------------------
// Two switches, one prisoner at a time.

class TwoSwitchStage : public Monitor {
 public:
  explicit TwoSwitchStage(const ProtocolInstance& inst) : inst_(inst) {
    signal_ = inst.programs[0].steps_with_note("signal-next").front();
  }
  std::string_view id() const override { return "two-switch-stage"; }

  std::optional<std::string> check_state(const WorldState& s) override {
    std::size_t active = 0;
    for (std::size_t p = 0; p < inst_.n; ++p) active += stage(s, p) == Stage::Active;
    const auto in01 = [](Config c) { return index(c) <= 1; };
    const bool a = std::all_of(s.rooms.begin(), s.rooms.end(), in01) && active == 1;
    std::size_t zero = 0, token = 0;
    for (Config c : s.rooms) {
      zero += index(c) == 0;
      token += index(c) == 2 || index(c) == 3;
    }
    const bool b = zero + 1 == s.r() && token == 1 && active == 0;
    if (a == b) return "stage disjunction fails with " + std::to_string(active) + " active prisoners";
    return std::nullopt;
  }

 protected:
  enum class Stage { Waiting, Active, Exhausted };

  Stage stage(const WorldState& s, std::size_t p) const {
    const PrisonerState& c = s.prisoners[p];
    if (p == 0) return c.step > signal_ ? Stage::Exhausted : Stage::Active;
    if (c.step == 0) return Stage::Waiting;
    return inst_.programs[p].at_end(c) ? Stage::Exhausted : Stage::Active;
  }
  std::size_t exhausted(const WorldState& s) const {
    std::size_t k = 0;
    for (std::size_t p = 0; p < inst_.n; ++p) k += stage(s, p) == Stage::Exhausted;
    return k;
  }

  const ProtocolInstance& inst_;
  std::uint32_t signal_ = 0;
};

class TwoSwitchCount final : public TwoSwitchStage {
 public:
  using TwoSwitchStage::TwoSwitchStage;
  std::string_view id() const override { return "two-switch-count"; }

  std::optional<std::string> check_state(const WorldState& s) override {
    if (s.prisoners[0].declared && exhausted(s) != inst_.n) {
      return "leader declared with " + std::to_string(exhausted(s)) + " of " + std::to_string(inst_.n) +
             " prisoners exhausted";
    }
    return std::nullopt;
  }

  std::optional<std::string> check_edge(const WorldState& from, VisitEvent e, const StepResult& res,
                                        const WorldState& to) override {
    if (e.prisoner != 0 || !res.outcome.fired) return std::nullopt;
    const Program& leader = inst_.programs[0];
    if (leader.at_end(from.prisoners[0]) || note_at(leader, from.prisoners[0]) != "count") return std::nullopt;
    const std::size_t k = leader.locate(from.prisoners[0].step).iterations.back() + 1;
    if (exhausted(to) != k) {
      return "after count " + std::to_string(k) + " there are " + std::to_string(exhausted(to)) +
             " exhausted prisoners";
    }
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Two switches, one room at a time.

class RoomPhase final : public Monitor {
 public:
  explicit RoomPhase(const ProtocolInstance& inst) : inst_(inst) {
    const Program& leader = inst.programs[0];
    round_.resize(leader.position_count());
    std::uint32_t j = 0;
    for (std::uint32_t s = 0; s < leader.length(); ++s) {
      j += leader.leaf_at(s).note == "ready-0";
      round_[s] = j;
    }
    round_.back() = static_cast<std::uint32_t>((inst.r - 1) / 2);
    end_p_ = 2 * static_cast<std::uint32_t>(inst.r - 1);
  }
  std::string_view id() const override { return "room-phase"; }

  std::optional<std::string> check_state(const WorldState& s) override {
    const PrisonerState& lc = s.prisoners[0];
    if (lc.declared) return std::nullopt;
    const Program& leader = inst_.programs[0];
    const std::string& note = note_at(leader, lc);
    const std::uint32_t j = round_[lc.step];
    std::vector<std::uint32_t> pos(inst_.n, 0);
    for (std::size_t p = 1; p < inst_.n; ++p) pos[p] = progress(s, p);
    std::size_t done = 0;
    for (Config c : s.rooms) done += index(c) == kDone;

    if (note == "ready-0") return transition(s, pos, 2 * (j - 1), 4 * (j - 1));
    if (note == "transition-0" || note == "ready-1") return transition(s, pos, 2 * j - 1, 4 * (j - 1) + 2);
    if (note == "transition-1") return transition(s, pos, 2 * j, 4 * j);
    if (note.empty() || note == "call") return transition(s, pos, inst_.r - 1, end_p_);

    const bool zero_phase = note == "count-0" || note == "done-0";
    const bool one_phase = note == "count-1" || note == "done-1";
    if (!zero_phase && !one_phase) return "leader at unexpected instruction '" + note + "'";
    const std::size_t expect_done = zero_phase ? 2 * (j - 1) : 2 * j - 1;
    if (done != expect_done) return phase_msg(zero_phase, j) + ": " + std::to_string(done) + " DONE rooms";
    // Active room: {1, UP} in a 0-phase, {0, UP} in a 1-phase; others idle.
    const std::uint16_t idle = zero_phase ? 0 : 1, busy = zero_phase ? 1 : 0;
    std::size_t active = 0, active_busy = 0;
    for (Config c : s.rooms) {
      const auto v = index(c);
      if (v == kDone || v == idle) continue;
      if (v == busy || v == kUp) {
        ++active;
        active_busy += v == busy;
      } else {
        return phase_msg(zero_phase, j) + ": room in configuration " + inst_.config_name(c);
      }
    }
    if (active != 1) return phase_msg(zero_phase, j) + ": " + std::to_string(active) + " active rooms";

    const std::uint32_t lo = zero_phase ? 4 * (j - 1) : 4 * (j - 1) + 2;
    const std::uint32_t hi = zero_phase ? 4 * (j - 1) + 2 : 4 * j;
    const std::uint32_t forbidden = zero_phase ? 4 * (j - 1) + 3 : 4 * j + 1;
    std::size_t marked = 0;
    for (std::size_t p = 1; p < inst_.n; ++p) {
      if (pos[p] < lo || pos[p] > hi || pos[p] == forbidden) {
        return phase_msg(zero_phase, j) + ": " + who(p) + " at progress " + std::to_string(pos[p]);
      }
      marked += pos[p] >= hi;
    }
    const bool at_done = note == "done-0" || note == "done-1";
    const std::size_t counted = at_done ? inst_.n - 2 : leader.locate(lc.step).iterations.back();
    if (marked != counted + active_busy) {
      return phase_msg(zero_phase, j) + ": " + std::to_string(marked) + " marked, " + std::to_string(counted) +
             " counted";
    }
    return std::nullopt;
  }

  std::optional<std::string> check_edge(const WorldState& from, VisitEvent e, const StepResult& res,
                                        const WorldState&) override {
    const PrisonerState& lc = from.prisoners[0];
    if (lc.declared) return std::nullopt;
    const std::string& note = note_at(inst_.programs[0], lc);
    if (e.prisoner == 0) {
      if (res.outcome.fired && (note == "ready-0" || note == "ready-1") && index(res.outcome.new_config) != kUp) {
        return "ready flip did not leave the room UP";
      }
      return std::nullopt;
    }
    const bool transition = note.rfind("transition", 0) == 0 || note.rfind("ready", 0) == 0;
    if (transition && res.outcome.new_config != res.before) {
      return who(e.prisoner) + " reconfigured a room while the leader was at " + note;
    }
    return std::nullopt;
  }

 private:
  static constexpr std::uint16_t kUp = 2, kDone = 3;

  // 4 * outer iteration + stage (see-0, mark-1, see-1, mark-0).
  std::uint32_t progress(const WorldState& s, std::size_t p) const {
    const Program& prog = inst_.programs[p];
    const PrisonerState& c = s.prisoners[p];
    const std::string& note = note_at(prog, c);
    if (note.empty() || note == "await-call" || c.declared) return end_p_;
    const auto loc = prog.locate(c.step);
    const std::uint32_t stage = note == "see-0" ? 0 : note == "mark-1" ? 1 : note == "see-1" ? 2 : 3;
    return 4 * loc.iterations.front() + stage;
  }

  std::optional<std::string> transition(const WorldState& s, const std::vector<std::uint32_t>& pos,
                                        std::size_t done, std::uint32_t p_expect) const {
    std::size_t d = 0;
    for (Config c : s.rooms) {
      if (index(c) == kDone) {
        ++d;
      } else if (index(c) > 1) {
        return "transition: room in configuration " + inst_.config_name(c);
      }
    }
    if (d != done) return "transition: " + std::to_string(d) + " DONE rooms, expected " + std::to_string(done);
    for (std::size_t p = 1; p < inst_.n; ++p) {
      if (pos[p] != p_expect) {
        return "transition: " + who(p) + " at progress " + std::to_string(pos[p]) + ", expected " +
               std::to_string(p_expect);
      }
    }
    return std::nullopt;
  }

  static std::string phase_msg(bool zero, std::uint32_t j) {
    return std::string(zero ? "0" : "1") + "-phase of round " + std::to_string(j);
  }

  const ProtocolInstance& inst_;
  std::vector<std::uint32_t> round_;
  std::uint32_t end_p_ = 0;
};

// ---------------------------------------------------------------------------
// Six configurations: DONE rooms stay DONE.

class DoneStable final : public Monitor {
 public:
  std::string_view id() const override { return "done-stable"; }
  std::optional<std::string> check_edge(const WorldState&, VisitEvent e, const StepResult& res,
                                        const WorldState&) override {
    if (index(res.before) == 1 && index(res.outcome.new_config) != 1) {
      return "room " + std::to_string(e.room) + " left DONE";
    }
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Three configurations, probability 1.

class Prob1Phase final : public Monitor {
 public:
  explicit Prob1Phase(const ProtocolInstance& inst) : inst_(inst) {}
  std::string_view id() const override { return "prob1-phase"; }

  std::optional<std::string> check_state(const WorldState& s) override {
    std::optional<std::size_t> active;
    for (std::size_t p = 0; p < inst_.n; ++p) {
      if (region(s, p) != Region::Active) continue;
      if (active) return "two active prisoners: " + std::to_string(*active) + " and " + std::to_string(p);
      active = p;
    }
    if (active) {
      for (std::size_t p = 0; p < inst_.n; ++p) {
        const Region g = region(s, p);
        if (p < *active && g != Region::Handoff && g != Region::Post && g != Region::Done) {
          return who(p) + " has not handed off before active " + who(*active);
        }
        if (p > *active && g != Region::Pre && g != Region::Await) {
          return who(p) + " has left the waiting region before active " + who(*active);
        }
      }
    }
    int phase = active ? phase_of(s, *active) : 0;
    const std::uint16_t a = static_cast<std::uint16_t>(phase), b = static_cast<std::uint16_t>((phase + 1) % 3);
    for (Config c : s.rooms) {
      if (index(c) != a && index(c) != b) {
        return "phase-" + std::to_string(phase) + " with a room in configuration " + inst_.config_name(c);
      }
    }
    if (is_initial(s)) return snapshot(s, 0, active);
    return std::nullopt;
  }

  std::optional<std::string> check_edge(const WorldState& from, VisitEvent e, const StepResult&,
                                        const WorldState& to) override {
    const std::size_t p = e.prisoner;
    if (region(from, p) != Region::Active) return std::nullopt;
    const int before = phase_of(from, p);
    const int after = region(to, p) == Region::Active ? phase_of(to, p) : -1;
    if (before == after) return std::nullopt;
    // Snapshot at the start of the next phase (or of the next prisoner's turn).
    return snapshot(to, static_cast<std::uint16_t>((before + 1) % 3), p);
  }

 private:
  enum class Region { Pre, Await, Active, Handoff, Post, Done };

  Region region(const WorldState& s, std::size_t p) const {
    const PrisonerState& c = s.prisoners[p];
    const std::string& note = note_at(inst_.programs[p], c);
    if (c.declared || note.empty()) return Region::Done;
    if (note.rfind("pre-", 0) == 0) return Region::Pre;
    if (note == "await") return Region::Await;
    if (note.rfind("phase-", 0) == 0) return Region::Active;
    if (note == "handoff") return Region::Handoff;
    return Region::Post;
  }
  int phase_of(const WorldState& s, std::size_t p) const {
    return note_at(inst_.programs[p], s.prisoners[p]).back() - '0';
  }
  bool is_initial(const WorldState& s) const {
    return std::all_of(s.prisoners.begin(), s.prisoners.end(), [](const PrisonerState& c) { return c.step == 0; }) &&
           std::all_of(s.visits.begin(), s.visits.end(), [](std::uint32_t v) { return v == 0; });
  }

  // Every room in `c`; every other prisoner about to flip the configuration
  // that precedes `c` into it, or done (plus one awaiting prisoner at c = 0).
  std::optional<std::string> snapshot(const WorldState& s, std::uint16_t c, std::optional<std::size_t> mover) const {
    for (Config room : s.rooms) {
      if (index(room) != c) {
        return "phase start " + std::to_string(c) + ": room in configuration " + inst_.config_name(room);
      }
    }
    static const char* const kInto[] = {"1to0", "2to1", "0to2"};
    std::size_t awaiting = 0;
    for (std::size_t p = 0; p < inst_.n; ++p) {
      if (mover && p == *mover) continue;
      const std::string& note = note_at(inst_.programs[p], s.prisoners[p]);
      const Region g = region(s, p);
      if (g == Region::Done) continue;
      if (c == 0 && g == Region::Await) {
        ++awaiting;
        continue;
      }
      const std::string want = kInto[c];
      if (note.size() < want.size() || note.compare(note.size() - want.size(), want.size(), want) != 0) {
        return "phase start " + std::to_string(c) + ": " + who(p) + " at '" + note + "'";
      }
    }
    if (awaiting > 1) return "phase start 0: " + std::to_string(awaiting) + " prisoners awaiting";
    return std::nullopt;
  }

  const ProtocolInstance& inst_;
};

// ---------------------------------------------------------------------------
// Two configurations, probability epsilon: imbalance ledger.

class Imbalance final : public Monitor {
 public:
  explicit Imbalance(const ProtocolInstance& inst) : inst_(inst) {
    for (const Program& p : inst.programs) profiles_.push_back(imbalance_profile(p));
  }
  std::string_view id() const override { return "imbalance"; }

  std::optional<std::string> check_state(const WorldState& s) override {
    long sum = 0;
    const long r = static_cast<long>(inst_.r);
    for (std::size_t k = 0; k < inst_.n; ++k) {
      const Program& prog = inst_.programs[k];
      const std::uint32_t step = s.prisoners[k].step;
      const int imb = profiles_[k][step];
      sum += imb;
      const bool last = k + 1 == inst_.n;
      const long startup_end = r + static_cast<long>(k), check_end = startup_end + 2 * r;
      if (!last && prog.at_end(s.prisoners[k])) {
        if (imb != -1) return who(k) + " finished with imbalance " + std::to_string(imb);
      } else if (imb < 0) {
        return who(k) + " has negative imbalance " + std::to_string(imb) + " before finishing";
      }
      if ((step == startup_end || step == check_end) && imb != startup_end) {
        return who(k) + " imbalance " + std::to_string(imb) + " at a phase end, expected " +
               std::to_string(startup_end);
      }
      // Positive between the first flip and cooldown; p_0 touches 0 after check-down.
      if (step >= 1 && step <= check_end && (k == 0 ? imb < 0 : imb <= 0)) {
        return who(k) + " imbalance " + std::to_string(imb) + " before cooldown";
      }
    }
    const long ones = std::count_if(s.rooms.begin(), s.rooms.end(), [](Config c) { return index(c) == 1; });
    if (sum != ones) {
      return "imbalance sum " + std::to_string(sum) + " differs from " + std::to_string(ones) + " rooms in 1";
    }
    if (sum < 0 || sum > r) return "imbalance sum " + std::to_string(sum) + " outside [0, r]";
    return std::nullopt;
  }

 private:
  const ProtocolInstance& inst_;
  std::vector<std::vector<int>> profiles_;
};

// ---------------------------------------------------------------------------
// Universal and transform-specific checks.

class ForcedFlip final : public Monitor {
 public:
  std::string_view id() const override { return "forced-flip"; }
  std::optional<std::string> check_edge(const WorldState&, VisitEvent e, const StepResult& res,
                                        const WorldState&) override {
    if (res.before == res.outcome.new_config) return "visit left room " + std::to_string(e.room) + " unchanged";
    return std::nullopt;
  }
};

class VisitsMonotone final : public Monitor {
 public:
  std::string_view id() const override { return "visits-monotone"; }
  std::optional<std::string> check_edge(const WorldState& from, VisitEvent, const StepResult&,
                                        const WorldState& to) override {
    for (std::size_t i = 0; i < from.visits.size(); ++i) {
      if (to.visits[i] < from.visits[i]) return "visit counter decreased";
    }
    return std::nullopt;
  }
};

struct Entry {
  std::function<bool(const ProtocolInstance&)> applies;
  std::function<std::unique_ptr<Monitor>(const ProtocolInstance&)> make;
};

const std::map<std::string, Entry, std::less<>>& registry() {
  static const std::map<std::string, Entry, std::less<>> r = [] {
    std::map<std::string, Entry, std::less<>> m;
    const auto two_switch = [](const ProtocolInstance& i) {
      return i.family == "two-switch-prisoner" && only_transforms(i, {"repeated-entries"});
    };
    m["two-switch-stage"] = {two_switch, [](const ProtocolInstance& i) { return std::make_unique<TwoSwitchStage>(i); }};
    m["two-switch-count"] = {two_switch, [](const ProtocolInstance& i) { return std::make_unique<TwoSwitchCount>(i); }};
    m["room-phase"] = {[](const ProtocolInstance& i) {
                         return i.family == "two-switch-room" && only_transforms(i, {"multiple-declarations"});
                       },
                       [](const ProtocolInstance& i) { return std::make_unique<RoomPhase>(i); }};
    m["done-stable"] = {[](const ProtocolInstance& i) { return i.family == "room-at-a-time-six" && i.transforms.empty(); },
                        [](const ProtocolInstance&) { return std::make_unique<DoneStable>(); }};
    m["prob1-phase"] = {[](const ProtocolInstance& i) { return i.family == "prob1-3config" && only_transforms(i, {}); },
                        [](const ProtocolInstance& i) { return std::make_unique<Prob1Phase>(i); }};
    m["imbalance"] = {[](const ProtocolInstance& i) { return i.family == "two-config-prob-eps" && i.transforms.empty(); },
                      [](const ProtocolInstance& i) { return std::make_unique<Imbalance>(i); }};
    m["forced-flip"] = {[](const ProtocolInstance& i) { return has_transform(i, "forced-flip"); },
                        [](const ProtocolInstance&) { return std::make_unique<ForcedFlip>(); }};
    m["visits-monotone"] = {[](const ProtocolInstance&) { return true; },
                            [](const ProtocolInstance&) { return std::make_unique<VisitsMonotone>(); }};
    m["declare-ownership"] = {[](const ProtocolInstance&) { return true; },
                              [](const ProtocolInstance& i) { return make_declare_ownership_monitor(i); }};
    m["finish-ownership"] = {[](const ProtocolInstance&) { return true; },
                             [](const ProtocolInstance& i) { return make_finish_ownership_monitor(i); }};
    return m;
  }();
  return r;
}

}  // namespace

std::vector<int> imbalance_profile(const Program& program) {
  std::vector<int> out(program.position_count(), 0);
  for (std::uint32_t s = 0; s < program.length(); ++s) {
    int delta = 0;
    if (const auto* f = std::get_if<Flip>(&program.leaf_at(s).action)) {
      if (index(f->from) == 0 && index(f->to) == 1) delta = 1;
      if (index(f->from) == 1 && index(f->to) == 0) delta = -1;
    }
    out[s + 1] = out[s] + delta;
  }
  return out;
}

std::vector<std::string> monitor_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : registry()) ids.push_back(id);
  return ids;
}

std::vector<std::string> monitors_for(const ProtocolInstance& instance) {
  std::vector<std::string> ids;
  for (const auto& [id, e] : registry()) {
    if (e.applies(instance)) ids.push_back(id);
  }
  return ids;
}

std::unique_ptr<Monitor> make_monitor(std::string_view id, const ProtocolInstance& instance) {
  const auto it = registry().find(id);
  if (it == registry().end()) throw UnknownId("unknown invariant '" + std::string(id) + "'");
  if (!it->second.applies(instance)) {
    throw ConstructionError("invariant '" + std::string(id) + "' does not apply to " + instance.label);
  }
  return it->second.make(instance);
}

}  // namespace lockstep
