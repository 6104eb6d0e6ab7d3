#include "lockstep/cursor_graph.hpp"

#include <algorithm>
#include <deque>

namespace lockstep {

CursorGraph::CursorGraph(const Program& program) : CursorGraph(program, PrisonerState{}) {}

CursorGraph::CursorGraph(const Program& program, PrisonerState root)
    : program_(&program), configs_(program.config_count()) {
  std::vector<std::uint32_t> queue;
  intern(normalize(root), queue);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t id = queue[head];
    for (std::uint16_t c = 0; c < configs_; ++c) {
      const PrisonerState from = nodes_[id];
      auto [next, out] = visit(from, program, config(c));
      CursorEdge edge;
      edge.observed = config(c);
      edge.new_config = out.new_config;
      edge.fired = out.fired;
      edge.declared = out.declared;
      edge.target = intern(normalize(next), queue);
      edges_.push_back(edge);
    }
  }

  // Backward closure from nodes owning an acting edge.
  std::vector<std::vector<std::uint32_t>> preds(nodes_.size());
  can_act_.assign(nodes_.size(), 0);
  std::deque<std::uint32_t> work;
  for (std::uint32_t id = 0; id < nodes_.size(); ++id) {
    for (const CursorEdge& e : edges(id)) {
      preds[e.target].push_back(id);
      if (e.acts() && !can_act_[id]) {
        can_act_[id] = 1;
        work.push_back(id);
      }
    }
  }
  while (!work.empty()) {
    const std::uint32_t id = work.front();
    work.pop_front();
    for (std::uint32_t p : preds[id]) {
      if (!can_act_[p]) {
        can_act_[p] = 1;
        work.push_back(p);
      }
    }
  }
}

std::uint64_t CursorGraph::key(const PrisonerState& s) {
  return (static_cast<std::uint64_t>(s.step) << 32) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.oscillate_net) & 0x7fffffffu) << 1) |
         (s.declared ? 1u : 0u);
}

PrisonerState CursorGraph::normalize(PrisonerState state) const {
  if (state.declared || program_->at_end(state) ||
      !std::holds_alternative<Oscillate>(program_->leaf_at(state.step).action)) {
    state.oscillate_net = 0;
  } else {
    state.oscillate_net = std::max(state.oscillate_net, 0);
  }
  return state;
}

std::uint32_t CursorGraph::intern(const PrisonerState& state, std::vector<std::uint32_t>& queue) {
  const auto [it, inserted] = ids_.try_emplace(key(state), static_cast<std::uint32_t>(nodes_.size()));
  if (inserted) {
    nodes_.push_back(state);
    queue.push_back(it->second);
  }
  return it->second;
}

std::span<const CursorEdge> CursorGraph::edges(std::uint32_t id) const {
  return std::span<const CursorEdge>(edges_).subspan(static_cast<std::size_t>(id) * configs_, configs_);
}

std::optional<std::uint32_t> CursorGraph::find(const PrisonerState& state) const {
  const auto it = ids_.find(key(normalize(state)));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::vector<Config>> CursorGraph::forcing_word(std::uint32_t from,
                                                             std::span<const Config> allowed) const {
  const auto is_allowed = [&](Config c) {
    return std::find(allowed.begin(), allowed.end(), c) != allowed.end();
  };
  std::vector<std::int64_t> parent(nodes_.size(), -1);
  std::vector<Config> via(nodes_.size());
  std::vector<std::uint8_t> seen(nodes_.size(), 0);
  std::deque<std::uint32_t> work{from};
  seen[from] = 1;
  while (!work.empty()) {
    const std::uint32_t id = work.front();
    work.pop_front();
    for (const CursorEdge& e : edges(id)) {
      if (!is_allowed(e.observed)) continue;
      if (e.acts()) {
        std::vector<Config> word{e.observed};
        for (std::uint32_t at = id; parent[at] >= 0; at = static_cast<std::uint32_t>(parent[at])) {
          word.push_back(via[at]);
        }
        std::reverse(word.begin(), word.end());
        return word;
      }
      if (!seen[e.target]) {
        seen[e.target] = 1;
        parent[e.target] = id;
        via[e.target] = e.observed;
        work.push_back(e.target);
      }
    }
  }
  return std::nullopt;
}

bool is_finished(const Program& program, const PrisonerState& state) {
  const CursorGraph graph(program, state);
  return !graph.can_act(0);
}

}  // namespace lockstep
