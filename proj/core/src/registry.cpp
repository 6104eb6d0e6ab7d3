#include "lockstep/registry.hpp"

#include <functional>
#include <map>

#include "lockstep/protocols.hpp"
#include "lockstep/s1_adversary.hpp"
#include "lockstep/scheduling.hpp"

namespace lockstep {
namespace {

using Builder = std::function<ProtocolInstance(const ProtocolParams&)>;

std::size_t rooms(const ProtocolParams& p, std::size_t fallback) { return p.r.value_or(fallback); }

ProtocolInstance restart(ProtocolInstance inst, const ProtocolParams& p) {
  if (p.start) inst.start = parse_start(inst, *p.start, inst.r);
  return inst;
}

const std::map<std::string, Builder, std::less<>>& builders() {
  using namespace protocols;
  static const std::map<std::string, Builder, std::less<>> b = {
      {"one-room-known", [](const ProtocolParams& p) { return one_room_known(p.n, rooms(p, 1)); }},
      {"one-room-known-per-room", [](const ProtocolParams& p) { return one_room_known(p.n, rooms(p, 5)); }},
      {"one-room-unknown",
       [](const ProtocolParams& p) {
         auto probe = one_room_unknown(p.n, config(0), rooms(p, 1));
         const Config start = p.start ? parse_start(probe, *p.start, probe.r).front() : config(0);
         return one_room_unknown(p.n, start, rooms(p, 1));
       }},
      {"at-least-one-room", [](const ProtocolParams& p) { return restart(at_least_one_room(p.n, rooms(p, 2)), p); }},
      {"sequential-chain", [](const ProtocolParams& p) { return sequential_chain(p.n, rooms(p, 2)); }},
      {"room-at-a-time-six", [](const ProtocolParams& p) { return room_at_a_time_six(p.n, rooms(p, 3)); }},
      {"two-switch-prisoner", [](const ProtocolParams& p) { return two_switch_prisoner_at_a_time(p.n, rooms(p, 2)); }},
      {"two-switch-room", [](const ProtocolParams& p) { return two_switch_room_at_a_time(p.n, rooms(p, 3)); }},
      {"arbitrary-start",
       [](const ProtocolParams& p) {
         const auto base = two_switch_prisoner_at_a_time(p.n, rooms(p, 2));
         const auto start = p.start ? parse_start(base, *p.start, base.r) : base.start;
         return arbitrary_start_wrapper(base, start);
       }},
      {"knowledge-3config", [](const ProtocolParams& p) { return three_config_knowledge(p.n, rooms(p, 2)); }},
      {"prob1-3config", [](const ProtocolParams& p) { return three_config_prob1(p.n, rooms(p, 2)); }},
      {"two-config-prob-eps", [](const ProtocolParams& p) { return two_config_prob_eps(p.n, rooms(p, 2)); }},
      {"two-rooms-3config",
       [](const ProtocolParams& p) {
         if (rooms(p, 2) != 2) throw UnsupportedParameter("two-rooms-3config needs r = 2");
         return two_rooms_three_configs(p.n);
       }},
      {"multi-declare",
       [](const ProtocolParams& p) { return with_multiple_declarations(two_switch_room_at_a_time(p.n, rooms(p, 3))); }},
      {"repeated-entries",
       [](const ProtocolParams& p) {
         return with_repeated_entries(two_switch_prisoner_at_a_time(p.n, rooms(p, 2)), p.ell);
       }},
      {"forced-flip",
       [](const ProtocolParams& p) { return forced_flip_transform(two_switch_prisoner_at_a_time(p.n, rooms(p, 2))); }},
      {"mutant-two-switch-count", [](const ProtocolParams& p) { return mutants::two_switch_short_count(p.n, rooms(p, 2)); }},
      {"mutant-prob1-drop-see", [](const ProtocolParams& p) { return mutants::prob1_without_see(p.n, rooms(p, 2)); }},
      {"mutant-knowledge-drop-prepend",
       [](const ProtocolParams& p) { return mutants::knowledge_without_prepend(p.n, rooms(p, 2)); }},
  };
  return b;
}

}  // namespace

std::vector<Config> parse_start(const ProtocolInstance& inst, std::string_view text, std::size_t r) {
  std::vector<Config> out;
  std::size_t at = 0;
  while (true) {
    const std::size_t comma = text.find(',', at);
    out.push_back(inst.parse_config(text.substr(at, comma == std::string_view::npos ? text.npos : comma - at)));
    if (comma == std::string_view::npos) break;
    at = comma + 1;
  }
  if (out.size() == 1) out.assign(r, out.front());
  if (out.size() != r) throw UnsupportedParameter("start needs one configuration per room");
  return out;
}

std::vector<std::string> protocol_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : builders()) ids.push_back(id);
  return ids;
}

ProtocolInstance make_protocol(std::string_view id, const ProtocolParams& params) {
  const auto it = builders().find(id);
  if (it == builders().end()) throw UnknownId("unknown protocol '" + std::string(id) + "'");
  auto inst = it->second(params);
  // Protocols without their own start handling run from the given start as is.
  if (params.start && id != "one-room-unknown" && id != "at-least-one-room" && id != "arbitrary-start") {
    inst = restart(std::move(inst), params);
  }
  validate(inst);
  return inst;
}

std::vector<std::string> scheduler_ids() {
  return {"lemma1-pair", "random", "round-robin", "s1-adversary", "witness"};
}

std::unique_ptr<Scheduler> make_scheduler(std::string_view id, ProtocolInstance& inst, std::uint64_t seed) {
  if (id == "round-robin") return std::make_unique<RoundRobin>(inst.n, inst.r);
  if (id == "random") return std::make_unique<SeededRandom>(inst.n, inst.r, seed);
  if (id == "witness") return std::make_unique<ReplayThenRoundRobin>(prob_eps_witness(inst.n, inst.r), inst.n, inst.r);
  if (id == "lemma1-pair") {
    const SchedulePair pair = build_schedule_pair(inst);
    inst.start = pair.start;
    return pair.s2(inst.n);
  }
  if (id == "s1-adversary") return std::make_unique<S1Adversary>(inst);
  throw UnknownId("unknown scheduler '" + std::string(id) + "'");
}

}  // namespace lockstep
