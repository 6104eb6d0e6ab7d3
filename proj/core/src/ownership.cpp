#include "lockstep/ownership.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "lockstep/cursor_graph.hpp"

namespace lockstep {

OwnershipTable::OwnershipTable(std::size_t n, std::uint16_t m, std::span<const Config> start)
    : n_(n), m_(m), counts_(m, 0), owns_(n * m, 0) {
  for (Config c : start) {
    if (index(c) >= m) throw std::invalid_argument("start configuration out of range");
    ++counts_[index(c)];
  }
  for (std::size_t p = 0; p < n_; ++p) {
    for (std::uint16_t c = 0; c < m_; ++c) owns_[p * m_ + c] = counts_[c] == 0;
  }
}

void OwnershipTable::apply(const ObservedEvent& e) {
  const std::uint16_t a = index(e.in), b = index(e.out);
  if (e.prisoner >= n_ || a >= m_ || b >= m_) throw HistoryCorruption("event out of range");
  if (counts_[a] == 0) throw HistoryCorruption("no room is in configuration " + std::to_string(a));
  const std::size_t q = e.prisoner;
  if (a != b) {
    // Loss first: the moved room may be one p never saw.
    for (std::size_t p = 0; p < n_; ++p) {
      if (p != q && !owns_[p * m_ + a]) owns_[p * m_ + b] = 0;
    }
    --counts_[a];
    ++counts_[b];
    if (counts_[b] == 1) owns_[q * m_ + b] = 1;
  } else if (counts_[a] == 1) {
    owns_[q * m_ + a] = 1;
  }
  for (std::uint16_t c = 0; c < m_; ++c) {
    if (counts_[c] != 0) continue;
    for (std::size_t p = 0; p < n_; ++p) owns_[p * m_ + c] = 1;
  }
}

bool OwnershipTable::owns_all(std::size_t p) const {
  for (std::uint16_t c = 0; c < m_; ++c) {
    if (!owns_[p * m_ + c]) return false;
  }
  return true;
}

bool OwnershipTable::owns_nonempty(std::size_t p) const {
  for (std::uint16_t c = 0; c < m_; ++c) {
    if (counts_[c] != 0 && owns_[p * m_ + c]) return true;
  }
  return false;
}

OwnershipMatrix OwnershipTable::matrix() const {
  OwnershipMatrix out(n_, std::vector<bool>(m_));
  for (std::size_t p = 0; p < n_; ++p) {
    for (std::uint16_t c = 0; c < m_; ++c) out[p][c] = owns_[p * m_ + c] != 0;
  }
  return out;
}

OwnershipTable apply_event(OwnershipTable table, const ObservedEvent& event) {
  table.apply(event);
  return table;
}

OwnershipMatrix provable_ownership_bruteforce(std::span<const Config> start, std::span<const ObservedEvent> history,
                                              std::size_t n, std::uint16_t m) {
  if (start.size() > 5 || history.size() > 12) throw ResourceLimit("brute-force ownership needs r <= 5, <= 12 events");
  if (n > 32) throw ResourceLimit("brute-force ownership needs n <= 32");

  // A world is a multiset of rooms, each (config, mask of prisoners who visited it).
  using Room = std::pair<std::uint16_t, std::uint32_t>;
  using World = std::vector<Room>;
  std::set<World> worlds;
  {
    World w;
    for (Config c : start) w.emplace_back(index(c), 0u);
    std::sort(w.begin(), w.end());
    worlds.insert(std::move(w));
  }
  for (const ObservedEvent& e : history) {
    std::set<World> next;
    for (const World& w : worlds) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i].first != index(e.in)) continue;
        World v = w;
        v[i].first = index(e.out);
        v[i].second |= 1u << e.prisoner;
        std::sort(v.begin(), v.end());
        next.insert(std::move(v));
      }
    }
    if (next.empty()) throw HistoryCorruption("history inconsistent with start configuration");
    worlds = std::move(next);
  }
  OwnershipMatrix out(n, std::vector<bool>(m, true));
  for (const World& w : worlds) {
    for (const auto& [c, mask] : w) {
      for (std::size_t p = 0; p < n; ++p) {
        if (!(mask & (1u << p))) out[p][c] = false;
      }
    }
  }
  return out;
}

std::optional<Realization> find_unvisited_realization(std::span<const Config> start,
                                                      std::span<const ObservedEvent> history, std::size_t n,
                                                      std::size_t world_cap) {
  if (n > 32) throw ResourceLimit("realization search needs n <= 32");
  using Room = std::pair<std::uint16_t, std::uint32_t>;
  using World = std::vector<Room>;
  struct Node {
    World world;
    std::uint32_t parent;
    std::uint32_t choice;  // index into the parent's sorted world
  };
  std::vector<std::vector<Node>> layers(1);
  {
    World w;
    for (Config c : start) w.emplace_back(index(c), 0u);
    std::sort(w.begin(), w.end());
    layers[0].push_back({std::move(w), 0, 0});
  }
  for (const ObservedEvent& e : history) {
    std::vector<Node> next;
    std::map<World, std::uint32_t> ids;
    const auto& prev = layers.back();
    for (std::uint32_t k = 0; k < prev.size(); ++k) {
      const World& w = prev[k].world;
      for (std::uint32_t i = 0; i < w.size(); ++i) {
        if (w[i].first != index(e.in) || (i > 0 && w[i] == w[i - 1])) continue;
        World v = w;
        v[i].first = index(e.out);
        v[i].second |= 1u << e.prisoner;
        std::sort(v.begin(), v.end());
        if (ids.emplace(v, static_cast<std::uint32_t>(next.size())).second) next.push_back({std::move(v), k, i});
      }
    }
    if (next.empty()) throw HistoryCorruption("history inconsistent with start configuration");
    if (next.size() > world_cap) throw ResourceLimit("realization search exceeded its world cap");
    layers.push_back(std::move(next));
  }
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  const auto& last = layers.back();
  std::uint32_t pick = static_cast<std::uint32_t>(last.size());
  for (std::uint32_t k = 0; k < last.size() && pick == last.size(); ++k) {
    for (const auto& room : last[k].world) {
      if ((room.second & full) != full) pick = k;
    }
  }
  if (pick == last.size()) return std::nullopt;

  std::vector<std::uint32_t> choices(history.size());
  for (std::size_t t = history.size(); t > 0; --t) {
    choices[t - 1] = layers[t][pick].choice;
    pick = layers[t][pick].parent;
  }
  Realization out;
  World concrete;
  for (Config c : start) concrete.emplace_back(index(c), 0u);
  for (std::size_t t = 0; t < history.size(); ++t) {
    World sorted = concrete;
    std::sort(sorted.begin(), sorted.end());
    const Room want = sorted[choices[t]];
    const auto room = static_cast<std::size_t>(std::find(concrete.begin(), concrete.end(), want) - concrete.begin());
    concrete[room].first = index(history[t].out);
    concrete[room].second |= 1u << history[t].prisoner;
    out.rooms.push_back(room);
  }
  for (std::size_t room = 0; room < concrete.size(); ++room) {
    for (std::size_t p = 0; p < n; ++p) {
      if (!(concrete[room].second & (1u << p))) {
        out.prisoner = p;
        out.room = room;
        return out;
      }
    }
  }
  throw std::logic_error("realization lost its unvisited room");
}

namespace {

class OwnershipMonitor final : public Monitor {
 public:
  OwnershipMonitor(const ProtocolInstance& inst, bool finish)
      : inst_(inst), finish_(finish), table_(inst.n, inst.m, inst.start), was_finished_(inst.n, false) {
    if (finish_) {
      for (const auto& p : inst.programs) graphs_.emplace_back(p);
    }
  }

  std::string_view id() const override { return finish_ ? "finish-ownership" : "declare-ownership"; }
  bool stateless() const override { return false; }

  std::optional<std::string> check_edge(const WorldState& /*from*/, VisitEvent event, const StepResult& result,
                                        const WorldState& to) override {
    table_.apply(ObservedEvent{event.prisoner, result.before, result.outcome.new_config});
    if (!finish_) {
      if (!result.declaration) return std::nullopt;
      for (std::size_t p = 0; p < inst_.n; ++p) {
        if (!table_.owns_all(p)) {
          return "declaration while prisoner " + std::to_string(p) + " does not provably own every configuration";
        }
      }
      return std::nullopt;
    }
    for (std::size_t p = 0; p < inst_.n; ++p) {
      if (was_finished_[p]) continue;
      const auto node = graphs_[p].find(graphs_[p].normalize(to.prisoners[p]));
      const bool finished = node && !graphs_[p].can_act(*node);
      if (!finished) continue;
      was_finished_[p] = true;
      if (!to.prisoners[p].declared && !table_.owns_all(p)) {
        return "prisoner " + std::to_string(p) + " finished without provably owning every configuration";
      }
    }
    return std::nullopt;
  }

 private:
  const ProtocolInstance& inst_;
  bool finish_;
  OwnershipTable table_;
  std::vector<bool> was_finished_;
  std::vector<CursorGraph> graphs_;
};

}  // namespace

std::unique_ptr<Monitor> make_declare_ownership_monitor(const ProtocolInstance& instance) {
  return std::make_unique<OwnershipMonitor>(instance, false);
}

std::unique_ptr<Monitor> make_finish_ownership_monitor(const ProtocolInstance& instance) {
  return std::make_unique<OwnershipMonitor>(instance, true);
}

}  // namespace lockstep
