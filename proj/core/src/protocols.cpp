#include "lockstep/protocols.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace lockstep::protocols {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw UnsupportedParameter(what);
}

std::uint32_t count32(std::size_t v) {
  require(v <= std::numeric_limits<std::uint32_t>::max(), "repeat count overflows 32 bits");
  return static_cast<std::uint32_t>(v);
}

std::string prisoner_label(std::size_t i) { return i == 0 ? "leader" : "p" + std::to_string(i); }

ProtocolInstance make(std::string family, std::size_t n, std::size_t r, std::vector<std::string> names,
                      Guarantee guarantee) {
  ProtocolInstance inst;
  inst.label = family + "(n=" + std::to_string(n) + ",r=" + std::to_string(r) + ")";
  inst.family = std::move(family);
  inst.n = n;
  inst.r = r;
  inst.m = static_cast<std::uint16_t>(names.size());
  inst.config_names = std::move(names);
  inst.guarantee = guarantee;
  inst.start.assign(r, config(0));
  return inst;
}

void add(ProtocolInstance& inst, std::size_t i, std::vector<Instruction> body) {
  inst.programs.emplace_back(prisoner_label(i), std::move(body), inst.m);
}

constexpr Config kOff = config(0);
constexpr Config kOn = config(1);

ProtocolInstance two_switch_prisoner_impl(std::size_t n, std::size_t r, std::uint32_t ell,
                                          std::size_t leader_count) {
  require(n >= 2 && r >= 1, "two-switch-prisoner needs n >= 2, r >= 1");
  constexpr Config z = config(0), one = config(1), next = config(2), ready = config(3);
  auto inst = make("two-switch-prisoner", n, r, {"0", "1", "NEXT", "READY"}, Guarantee::Winning);
  const auto tours = [&] {
    std::vector<Instruction> block{repeat(count32(r), {flip(z, one, "tour-up")}),
                                   repeat(count32(r), {flip(one, z, "tour-down")})};
    if (ell == 1) return block;
    return std::vector<Instruction>{repeat(ell, std::move(block))};
  };
  std::vector<Instruction> leader = tours();
  leader.push_back(flip(z, next, "signal-next"));
  leader.push_back(repeat(count32(leader_count), {flip(next, ready, "count")}));
  leader.push_back(declare());
  add(inst, 0, std::move(leader));
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<Instruction> body{flip(ready, z, "activate")};
    for (auto& ins : tours()) body.push_back(std::move(ins));
    body.push_back(flip(z, next, "signal-next"));
    add(inst, i, std::move(body));
  }
  inst.reduction_ready = true;
  return inst;
}

ProtocolInstance prob1_impl(std::size_t n, std::size_t r, bool with_see) {
  require(n >= 2 && r >= 1, "prob1-3config needs n >= 2, r >= 1");
  constexpr Config c0 = config(0), c1 = config(1), c2 = config(2);
  auto inst = make("prob1-3config", n, r, {"0", "1", "2"}, Guarantee::Prob1);
  const std::uint32_t phase = count32(n + r - 1);
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<Instruction> body;
    if (k != 1) {
      body.push_back(repeat(count32(k - 1), {flip(c1, c0, "pre-1to0"), flip(c2, c1, "pre-2to1"),
                                             flip(c0, c2, "pre-0to2")}));
      if (with_see) body.push_back(see(c1, "await"));
    }
    body.push_back(repeat(phase, {flip(c0, c1, "phase-0")}));
    body.push_back(repeat(phase, {flip(c1, c2, "phase-1")}));
    body.push_back(repeat(phase, {flip(c2, c0, "phase-2")}));
    if (k != n) {
      body.push_back(oscillate(c1, c0, 1, "handoff"));
      body.push_back(repeat(count32(n - k), {flip(c2, c1, "post-2to1"), flip(c0, c2, "post-0to2"),
                                             flip(c1, c0, "post-1to0")}));
    } else {
      body.push_back(declare());
    }
    add(inst, k - 1, std::move(body));
  }
  return inst;
}

ProtocolInstance knowledge_impl(std::size_t n, std::size_t r, bool with_prepend) {
  require(n >= 1 && r >= 1, "knowledge-3config needs n >= 1, r >= 1");
  constexpr Config off = config(0), on = config(1), next = config(2);
  auto inst = make("knowledge-3config", n, r, {"OFF", "ON", "NEXT"}, Guarantee::KnowledgeOnly);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Instruction> body;
    if (i == 0 && with_prepend) body.push_back(flip(off, next, "seed"));
    body.push_back(flip(next, off, "take"));
    body.push_back(repeat(count32(r), {flip(off, on, "tour-up")}));
    body.push_back(repeat(count32(r), {flip(on, off, "tour-down")}));
    body.push_back(flip(off, next, "pass"));
    add(inst, i, std::move(body));
  }
  return inst;
}

// First leaf a prisoner executes cannot fire on a room in 0 or 1.
bool inert_on_zero_one(const Program& p) {
  if (p.length() == 0) return true;
  const auto& action = p.leaf_at(0).action;
  const auto outside = [](Config c) { return index(c) > 1; };
  if (const auto* f = std::get_if<Flip>(&action)) return outside(f->from);
  if (const auto* s = std::get_if<See>(&action)) return outside(s->target);
  if (const auto* o = std::get_if<Oscillate>(&action)) return outside(o->first) && outside(o->second);
  if (const auto* w = std::get_if<FlipNotIn>(&action)) {
    const auto has = [&](Config c) { return std::find(w->excluded.begin(), w->excluded.end(), c) != w->excluded.end(); };
    return has(config(0)) && has(config(1));
  }
  return false;
}

}  // namespace

ProtocolInstance one_room_known(std::size_t n, std::size_t r) {
  require(n >= 1 && r >= 1, "one-room-known needs n >= 1, r >= 1");
  auto inst = make(r == 1 ? "one-room-known" : "one-room-known-per-room", n, r, {"OFF", "ON"},
                   r == 1 ? Guarantee::Winning : Guarantee::Unclaimed);
  if (n == 1) {
    add(inst, 0, {see(kOff), declare()});
    return inst;
  }
  add(inst, 0, {repeat(count32(n - 1), {flip(kOn, kOff, "acknowledge")}), declare()});
  for (std::size_t i = 1; i < n; ++i) add(inst, i, {flip(kOff, kOn, "signal")});
  return inst;
}

ProtocolInstance one_room_unknown(std::size_t n, Config start, std::size_t r) {
  require(n >= 2 && r >= 1, "one-room-unknown needs n >= 2, r >= 1");
  require(index(start) < 2, "one-room-unknown start must be OFF or ON");
  auto inst = make(r == 1 ? "one-room-unknown" : "one-room-unknown-per-room", n, r, {"OFF", "ON"},
                   r == 1 ? Guarantee::Winning : Guarantee::Unclaimed);
  inst.start.assign(r, start);
  add(inst, 0, {repeat(count32(2 * n - 2), {flip(kOn, kOff, "acknowledge")}), declare()});
  for (std::size_t i = 1; i < n; ++i) add(inst, i, {repeat(2, {flip(kOff, kOn, "signal")})});
  return inst;
}

ProtocolInstance at_least_one_room(std::size_t n, std::size_t r) {
  require(n >= 2 && r >= 1, "at-least-one-room needs n >= 2, r >= 1");
  auto inst = make("at-least-one-room", n, r, {"OFF", "ON"}, Guarantee::Winning);
  inst.win = WinCondition::at_least_one_room();
  inst.start.assign(r, kOn);
  add(inst, 0, {repeat(count32((r + 1) * (n - 1)), {flip(kOn, kOff, "acknowledge")}), declare()});
  for (std::size_t i = 1; i < n; ++i) add(inst, i, {repeat(count32(r + 1), {flip(kOff, kOn, "signal")})});
  return inst;
}

ProtocolInstance sequential_chain(std::size_t n, std::size_t r) {
  require(n >= 1 && r >= 1, "sequential-chain needs n >= 1, r >= 1");
  require(n < std::numeric_limits<std::uint16_t>::max(), "sequential-chain: too many prisoners");
  std::vector<std::string> names;
  for (std::size_t c = 0; c <= n; ++c) names.push_back(std::to_string(c));
  auto inst = make("sequential-chain", n, r, std::move(names), Guarantee::Winning);
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<Instruction> body{repeat(count32(r), {flip(config(i - 1), config(i), "advance")})};
    if (i == n) body.push_back(declare());
    add(inst, i - 1, std::move(body));
  }
  return inst;
}

ProtocolInstance room_at_a_time_six(std::size_t n, std::size_t r) {
  require(n >= 2 && r >= 1, "room-at-a-time-six needs n >= 2, r >= 1");
  constexpr Config off = config(0), done = config(1), z = config(2), one = config(3), zp = config(4),
                   onep = config(5);
  auto inst = make("room-at-a-time-six", n, r, {"OFF", "DONE", "0", "1", "0'", "1'"}, Guarantee::Winning);
  add(inst, 0,
      {repeat(count32(r),
              {flip(off, z, "open"), repeat(count32(n - 1), {flip(one, z, "count")}), flip(z, zp, "confirm"),
               repeat(count32(n - 1), {flip(onep, zp, "count-prime")}), flip(zp, done, "close")}),
       declare()});
  for (std::size_t i = 1; i < n; ++i) {
    add(inst, i, {repeat(count32(r), {flip(z, one, "mark"), flip(zp, onep, "mark-prime")})});
  }
  return inst;
}

ProtocolInstance two_switch_prisoner_at_a_time(std::size_t n, std::size_t r) {
  return two_switch_prisoner_impl(n, r, 1, n);
}

ProtocolInstance two_switch_room_at_a_time(std::size_t n, std::size_t r) {
  require(n >= 2, "two-switch-room needs n >= 2");
  require(r >= 3 && r % 2 == 1, "two-switch-room supports odd r >= 3 only");
  constexpr Config z = config(0), one = config(1), up = config(2), done = config(3);
  auto inst = make("two-switch-room", n, r, {"0", "1", "UP", "DONE"}, Guarantee::Winning);
  const std::uint32_t counting = count32(n - 2);
  std::vector<Instruction> leader;
  for (std::size_t j = 1; j <= (r - 1) / 2; ++j) {
    leader.push_back(flip(z, up, "ready-0"));
    leader.push_back(repeat(counting, {flip(one, up, "count-0")}));
    leader.push_back(flip(one, done, "done-0"));
    leader.push_back(repeat(count32(r - (2 * j - 1)), {flip(z, one, "transition-0")}));
    leader.push_back(flip(one, up, "ready-1"));
    leader.push_back(repeat(counting, {flip(z, up, "count-1")}));
    leader.push_back(flip(z, done, "done-1"));
    leader.push_back(repeat(count32(r - 2 * j), {flip(one, z, "transition-1")}));
  }
  leader.push_back(declare());
  add(inst, 0, std::move(leader));
  for (std::size_t i = 1; i < n; ++i) {
    add(inst, i,
        {repeat(count32((r - 1) / 2),
                {repeat(count32(n), {see(z, "see-0"), see(up, "see-0")}), flip(up, one, "mark-1"),
                 repeat(count32(n), {see(one, "see-1"), see(up, "see-1")}), flip(up, z, "mark-0")})});
  }
  return inst;
}

ProtocolInstance arbitrary_start_wrapper(const ProtocolInstance& base, std::span<const Config> start) {
  if (!base.transforms.empty()) throw ConstructionError("arbitrary-start wrapper needs an untransformed base");
  if (start.size() != base.r) throw ConstructionError("arbitrary-start wrapper: one start config per room");
  if (base.m < 2) throw ConstructionError("arbitrary-start wrapper: base needs configurations 0 and 1");
  if (std::any_of(base.start.begin(), base.start.end(), [](Config c) { return index(c) != 0; })) {
    throw ConstructionError("arbitrary-start wrapper: base must start with every room in 0");
  }
  if (!base.reduction_ready) throw ConstructionError("arbitrary-start wrapper: base not marked reduction-ready");
  for (std::size_t i = 1; i < base.n; ++i) {
    if (!inert_on_zero_one(base.programs[i])) {
      throw ConstructionError("arbitrary-start wrapper: " + base.programs[i].label() +
                              " can act on a room in 0 or 1");
    }
  }
  std::size_t r0 = 0, r1 = 0;
  for (Config c : start) {
    if (index(c) >= base.m) throw ConstructionError("arbitrary-start wrapper: start config out of range");
    r0 += index(c) == 0;
    r1 += index(c) == 1;
  }
  const std::size_t n = base.n, r = base.r;
  ProtocolInstance out = base;
  out.programs.clear();
  out.start.assign(start.begin(), start.end());
  out.transforms.push_back("arbitrary-start");
  out.label = base.label + "+arbitrary-start";

  const Config z = config(0), one = config(1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Instruction> body;
    if (i == 0) {
      body.push_back(repeat(count32(r - r0 - r1), {flip_not_in({z, one}, one, "clear")}));
      body.push_back(repeat(count32(r - r0 + (n - 1) * (r0 + 1)), {flip(one, z, "drain")}));
    } else {
      body.push_back(repeat(count32(r0 + 1), {flip(z, one, "confirm-clear")}));
    }
    for (const auto& ins : base.programs[i].body()) body.push_back(ins);
    out.programs.emplace_back(base.programs[i].label(), std::move(body), base.m);
  }
  out.reduction_ready = false;
  return out;
}

ProtocolInstance three_config_knowledge(std::size_t n, std::size_t r) { return knowledge_impl(n, r, true); }

ProtocolInstance three_config_prob1(std::size_t n, std::size_t r) { return prob1_impl(n, r, true); }

ProtocolInstance two_rooms_three_configs(std::size_t n) {
  require(n >= 2, "two-rooms-3config needs n >= 2");
  constexpr Config off = config(0), on = config(1), up = config(2);
  auto inst = make("two-rooms-3config", n, 2, {"OFF", "ON", "UP"}, Guarantee::Winning);
  add(inst, 0, {flip(off, up, "raise"), repeat(count32(n - 1), {flip(on, off, "acknowledge")}), declare()});
  for (std::size_t i = 1; i < n; ++i) add(inst, i, {see(up, "await"), flip(off, on, "signal")});
  return inst;
}

ProtocolInstance two_config_prob_eps(std::size_t n, std::size_t r) {
  require(n >= 2 && r >= 1, "two-config-prob-eps needs n >= 2, r >= 1");
  auto inst = make("two-config-prob-eps", n, r, {"0", "1"}, Guarantee::ProbEps);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    add(inst, k,
        {repeat(count32(r + k), {flip(kOff, kOn, "startup")}), repeat(count32(r), {flip(kOn, kOff, "check-down")}),
         repeat(count32(r), {flip(kOff, kOn, "check-up")}),
         repeat(count32(r + k + 1), {flip(kOn, kOff, "cooldown")})});
  }
  add(inst, n - 1,
      {repeat(count32(r + n - 1), {flip(kOff, kOn, "startup")}), repeat(count32(r), {flip(kOn, kOff, "check-down")}),
       repeat(count32(r), {flip(kOff, kOn, "check-up")}), declare()});
  return inst;
}

ProtocolInstance with_multiple_declarations(const ProtocolInstance& base) {
  if (base.family != "two-switch-room" || !base.transforms.empty()) {
    throw ConstructionError("multiple declarations need an untransformed two-switch-room base");
  }
  constexpr Config up = config(2), done = config(3);
  ProtocolInstance out = base;
  out.programs.clear();
  for (std::size_t i = 0; i < base.n; ++i) {
    std::vector<Instruction> body = base.programs[i].body();
    if (i == 0) {
      body.pop_back();  // final DECLARE moves behind the call
      body.push_back(flip(done, up, "call"));
      body.push_back(declare());
    } else {
      body.push_back(see(up, "await-call"));
      body.push_back(declare());
    }
    out.programs.emplace_back(base.programs[i].label(), std::move(body), base.m);
  }
  out.win = WinCondition::all_declare();
  out.transforms.push_back("multiple-declarations");
  out.label = base.label + "+multiple-declarations";
  return out;
}

ProtocolInstance with_repeated_entries(const ProtocolInstance& base, std::uint32_t ell) {
  if (base.family != "two-switch-prisoner" || !base.transforms.empty()) {
    throw ConstructionError("repeated entries need an untransformed two-switch-prisoner base");
  }
  if (ell == 0) throw UnsupportedParameter("repeated entries need ell >= 1");
  auto out = two_switch_prisoner_impl(base.n, base.r, ell, base.n);
  out.win = WinCondition::all_rooms(ell);
  out.transforms.push_back("repeated-entries");
  out.label = base.label + "+repeated-entries(ell=" + std::to_string(ell) + ")";
  return out;
}

ProtocolInstance forced_flip_transform(const ProtocolInstance& base) {
  if (std::find(base.transforms.begin(), base.transforms.end(), "forced-flip") != base.transforms.end()) {
    throw ConstructionError("forced flip already applied");
  }
  require(2u * base.m <= std::numeric_limits<std::uint16_t>::max(), "forced flip: too many configurations");
  ProtocolInstance out = base;
  out.m = static_cast<std::uint16_t>(2 * base.m);
  out.programs.clear();
  for (const auto& p : base.programs) out.programs.push_back(p.with_forced_flip());
  for (Config& c : out.start) c = config(2u * index(c));
  out.config_names.clear();
  for (const auto& name : base.config_names) {
    out.config_names.push_back(name + ".0");
    out.config_names.push_back(name + ".1");
  }
  out.reduction_ready = false;
  out.transforms.push_back("forced-flip");
  out.label = base.label + "+forced-flip";
  return out;
}

namespace mutants {

ProtocolInstance two_switch_short_count(std::size_t n, std::size_t r) {
  auto inst = two_switch_prisoner_impl(n, r, 1, n - 1);
  inst.label = "mutant-two-switch-count(n=" + std::to_string(n) + ",r=" + std::to_string(r) + ")";
  inst.transforms.push_back("mutant-short-count");
  return inst;
}

ProtocolInstance prob1_without_see(std::size_t n, std::size_t r) {
  auto inst = prob1_impl(n, r, false);
  inst.label = "mutant-prob1-drop-see(n=" + std::to_string(n) + ",r=" + std::to_string(r) + ")";
  inst.transforms.push_back("mutant-drop-see");
  return inst;
}

ProtocolInstance knowledge_without_prepend(std::size_t n, std::size_t r) {
  auto inst = knowledge_impl(n, r, false);
  inst.label = "mutant-knowledge-drop-prepend(n=" + std::to_string(n) + ",r=" + std::to_string(r) + ")";
  inst.transforms.push_back("mutant-drop-prepend");
  return inst;
}

}  // namespace mutants
}  // namespace lockstep::protocols
