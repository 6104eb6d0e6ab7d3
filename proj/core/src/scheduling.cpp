#include "lockstep/scheduling.hpp"

#include <map>
#include <tuple>

namespace lockstep {

RoundRobin::RoundRobin(std::size_t n, std::size_t r) : n_(n), r_(r) {
  if (n == 0 || r == 0) throw std::invalid_argument("round-robin needs n, r >= 1");
}

VisitEvent RoundRobin::next(const WorldView&) {
  const VisitEvent e{static_cast<std::size_t>(t_ % n_), static_cast<std::size_t>((t_ / n_) % r_)};
  ++t_;
  return e;
}

SeededRandom::SeededRandom(std::size_t n, std::size_t r, std::uint64_t seed) : n_(n), r_(r), rng_(seed) {
  if (n == 0 || r == 0) throw std::invalid_argument("random scheduler needs n, r >= 1");
}

VisitEvent SeededRandom::next(const WorldView&) {
  const std::uint64_t v = rng_() % (n_ * r_);
  return {static_cast<std::size_t>(v / r_), static_cast<std::size_t>(v % r_)};
}

ReplayThenRoundRobin::ReplayThenRoundRobin(std::vector<VisitEvent> prefix, std::size_t n, std::size_t r)
    : prefix_(std::move(prefix)), tail_(n, r) {}

VisitEvent ReplayThenRoundRobin::next(const WorldView& view) {
  if (at_ < prefix_.size()) return prefix_[at_++];
  return tail_.next(view);
}

std::vector<VisitEvent> prob_eps_witness(std::size_t n, std::size_t r) {
  std::vector<VisitEvent> out;
  const auto sweeps = [&](std::size_t p, std::size_t times) {
    for (std::size_t t = 0; t < times; ++t) {
      for (std::size_t room = 0; room < r; ++room) out.push_back({p, room});
    }
  };
  for (std::size_t k = 0; k < n; ++k) {
    // p_k and p_{k-1} alternate k times in room 0: startup begins, cooldown ends.
    for (std::size_t i = 0; k > 0 && i < k; ++i) {
      out.push_back({k, 0});
      out.push_back({k - 1, 0});
    }
    sweeps(k, k + 1 == n ? 3 : 4);
  }
  return out;
}

bool window_fair(const std::vector<VisitEvent>& events, std::size_t n, std::size_t r, std::size_t window) {
  if (events.size() < window) return true;
  std::vector<std::size_t> seen(n * r, 0);
  std::size_t covered = 0;
  const auto add = [&](const VisitEvent& e, int d) {
    std::size_t& s = seen[e.prisoner * r + e.room];
    if (d > 0 && s++ == 0) ++covered;
    if (d < 0 && --s == 0) --covered;
  };
  for (std::size_t i = 0; i < events.size(); ++i) {
    add(events[i], 1);
    if (i >= window) add(events[i - window], -1);
    if (i + 1 >= window && covered != n * r) return false;
  }
  return true;
}

RecurringConfig find_recurring_config(const ProtocolInstance& inst, Config c, std::uint64_t max_passes) {
  using Key = std::pair<std::uint16_t, std::vector<std::tuple<std::uint32_t, std::int32_t, bool>>>;
  std::map<Key, std::uint64_t> seen;
  Config room = c;
  std::vector<PrisonerState> cursors(inst.n);
  for (std::uint64_t pass = 0; pass <= max_passes; ++pass) {
    Key key{index(room), {}};
    for (const auto& s : cursors) key.second.emplace_back(s.step, s.oscillate_net, s.declared);
    if (const auto [it, fresh] = seen.emplace(std::move(key), pass); !fresh) {
      return RecurringConfig{room, pass - it->second, it->second};
    }
    for (std::size_t p = 0; p < inst.n; ++p) {
      auto [next, out] = visit(cursors[p], inst.programs[p], room);
      cursors[p] = next;
      room = out.new_config;
    }
  }
  throw ResourceLimit("no joint-state recurrence within " + std::to_string(max_passes) + " passes");
}

VisitEvent SingleRoom::next(const WorldView&) { return {static_cast<std::size_t>(t_++ % n_), 0}; }

VisitEvent PointerPasses::next(const WorldView& view) {
  if (t_ > 0 && t_ % n_ == 0 && view.state.rooms[room_] == d_) {
    room_ = (room_ + 1) % r_;
    ++advances_;
  }
  return {static_cast<std::size_t>(t_++ % n_), room_};
}

SchedulePair build_schedule_pair(const ProtocolInstance& inst, Config c) {
  if (inst.r < 2) throw UnsupportedParameter("the schedule pair needs r >= 2");
  if (index(c) >= inst.m) throw UnsupportedParameter("start configuration out of range");
  SchedulePair pair;
  pair.c = c;
  pair.recurrence = find_recurring_config(inst, c);
  pair.start.assign(inst.r, pair.recurrence.d);
  pair.start[0] = c;
  return pair;
}

ProtocolInstance with_start(const ProtocolInstance& inst, std::vector<Config> start) {
  if (start.size() != inst.r) throw std::invalid_argument("one start configuration per room");
  ProtocolInstance out = inst;
  out.start = std::move(start);
  return out;
}

std::unique_ptr<Scheduler> extend_to_valid(std::vector<VisitEvent> prefix, std::uint64_t declare_step, std::size_t n,
                                           std::size_t r) {
  if (prefix.size() > declare_step) prefix.resize(declare_step);
  return std::make_unique<ReplayThenRoundRobin>(std::move(prefix), n, r);
}

ObservationLogs observation_logs(const std::vector<TraceRecord>& trace, std::size_t n) {
  ObservationLogs logs(n);
  for (const auto& t : trace) logs.at(t.prisoner).emplace_back(t.config_before, t.config_after);
  return logs;
}

std::vector<VisitEvent> events_of(const std::vector<TraceRecord>& trace) {
  std::vector<VisitEvent> out;
  out.reserve(trace.size());
  for (const auto& t : trace) out.push_back({t.prisoner, t.room});
  return out;
}

}  // namespace lockstep
