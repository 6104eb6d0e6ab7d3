#include "lockstep/program.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lockstep {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_config(Config c, std::uint16_t m, const std::string& label) {
  if (index(c) >= m) {
    throw std::invalid_argument("program '" + label + "' references configuration " +
                                std::to_string(index(c)) + " but only " + std::to_string(m) +
                                " exist");
  }
}

}  // namespace

Instruction flip(Config from, Config to, std::string note) {
  return {Flip{from, to}, std::move(note)};
}
Instruction flip_not_in(std::vector<Config> excluded, Config to, std::string note) {
  return {FlipNotIn{std::move(excluded), to}, std::move(note)};
}
Instruction see(Config target, std::string note) { return {See{target}, std::move(note)}; }
Instruction oscillate(Config first, Config second, std::uint32_t k, std::string note) {
  return {Oscillate{first, second, k}, std::move(note)};
}
Instruction declare(std::string note) { return {Declare{}, std::move(note)}; }
Instruction repeat(std::uint32_t count, std::vector<Instruction> body, std::string note) {
  return {Repeat{count, std::move(body)}, std::move(note)};
}

Program::Program(std::string label, std::vector<Instruction> body, std::uint16_t config_count)
    : label_(std::move(label)), body_(std::move(body)), base_config_count_(config_count) {
  if (config_count < 2) throw std::invalid_argument("a room needs at least two configurations");
  nodes_.emplace_back();
  std::uint64_t total = 0;
  for (const auto& ins : body_) {
    const std::uint32_t child = build(ins, false);
    nodes_[0].children.push_back(child);
    total += nodes_[child].expanded;
  }
  if (total >= std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("program '" + label_ + "' expands beyond 2^32 instructions");
  }
  nodes_[0].expanded = total;
  length_ = static_cast<std::uint32_t>(total);
}

std::uint32_t Program::build(const Instruction& ins, bool inside_repeat) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  if (const auto* rep = std::get_if<Repeat>(&ins.op)) {
    if (rep->body.empty()) throw std::invalid_argument("REPEAT with an empty body in '" + label_ + "'");
    std::uint64_t body_len = 0;
    std::vector<std::uint32_t> children;
    for (const auto& inner : rep->body) {
      const std::uint32_t child = build(inner, true);
      children.push_back(child);
      body_len += nodes_[child].expanded;
    }
    Node& node = nodes_[id];
    node.count = rep->count;
    node.children = std::move(children);
    node.expanded = body_len * rep->count;
    if (node.expanded >= std::numeric_limits<std::uint32_t>::max()) {
      throw std::invalid_argument("program '" + label_ + "' expands beyond 2^32 instructions");
    }
    return id;
  }

  Leaf leaf;
  std::visit(overloaded{
                 [&](const Flip& f) {
                   check_config(f.from, base_config_count_, label_);
                   check_config(f.to, base_config_count_, label_);
                   leaf.action = f;
                 },
                 [&](const FlipNotIn& f) {
                   for (Config c : f.excluded) check_config(c, base_config_count_, label_);
                   check_config(f.to, base_config_count_, label_);
                   leaf.action = f;
                 },
                 [&](const See& s) {
                   check_config(s.target, base_config_count_, label_);
                   leaf.action = s;
                 },
                 [&](const Oscillate& o) {
                   check_config(o.first, base_config_count_, label_);
                   check_config(o.second, base_config_count_, label_);
                   if (o.first == o.second || o.k == 0) {
                     throw std::invalid_argument("degenerate OSCILLATE in '" + label_ + "'");
                   }
                   leaf.action = o;
                 },
                 [&](const Declare& d) {
                   has_declare_ = true;
                   declare_in_repeat_ = declare_in_repeat_ || inside_repeat;
                   leaf.action = d;
                 },
                 [](const Repeat&) {},
             },
             ins.op);
  leaf.note = ins.note;
  Node& node = nodes_[id];
  node.is_leaf = true;
  node.leaf = static_cast<std::uint32_t>(leaves_.size());
  node.expanded = 1;
  leaves_.push_back(std::move(leaf));
  return id;
}

Program Program::with_forced_flip() const {
  Program copy = *this;
  copy.forced_flip_ = true;
  return copy;
}

const Program::Node& Program::descend(std::uint32_t step,
                                      std::vector<std::uint32_t>* iterations) const {
  if (step >= length_) {
    throw std::logic_error("cursor step " + std::to_string(step) + " is outside program '" +
                           label_ + "'");
  }
  const Node* node = &nodes_[0];
  std::uint64_t offset = step;
  for (;;) {
    const Node* next = nullptr;
    for (std::uint32_t child : node->children) {
      const Node& c = nodes_[child];
      if (offset < c.expanded) {
        next = &c;
        break;
      }
      offset -= c.expanded;
    }
    if (next == nullptr) throw std::logic_error("corrupt program tree in '" + label_ + "'");
    if (next->is_leaf) return *next;
    const std::uint64_t body_len = next->expanded / next->count;
    if (iterations != nullptr) iterations->push_back(static_cast<std::uint32_t>(offset / body_len));
    offset %= body_len;
    node = next;
  }
}

const Leaf& Program::leaf_at(std::uint32_t step) const {
  return leaves_[descend(step, nullptr).leaf];
}

Location Program::locate(std::uint32_t step) const {
  Location loc;
  loc.leaf = &leaves_[descend(step, &loc.iterations).leaf];
  return loc;
}

std::vector<std::uint32_t> Program::steps_with_note(std::string_view note) const {
  std::vector<std::uint32_t> steps;
  for (std::uint32_t s = 0; s < length_; ++s) {
    if (leaf_at(s).note == note) steps.push_back(s);
  }
  return steps;
}

bool Program::contains_declare() const noexcept { return has_declare_; }
bool Program::declare_inside_repeat() const noexcept { return declare_in_repeat_; }

namespace {

std::pair<PrisonerState, VisitOutcome> base_visit(const PrisonerState& state, const Program& program,
                                                  Config observed) {
  if (index(observed) >= program.base_config_count()) {
    throw std::logic_error("observed configuration out of range for '" + program.label() + "'");
  }
  VisitOutcome out{observed, false, false};
  if (state.declared || program.at_end(state)) return {state, out};

  PrisonerState next = state;
  bool advance = false;
  std::visit(overloaded{
                 [&](const Flip& f) {
                   if (observed == f.from) {
                     out.new_config = f.to;
                     advance = true;
                   }
                 },
                 [&](const FlipNotIn& f) {
                   if (std::find(f.excluded.begin(), f.excluded.end(), observed) == f.excluded.end()) {
                     out.new_config = f.to;
                     advance = true;
                   }
                 },
                 [&](const See& s) { advance = observed == s.target; },
                 [&](const Oscillate& o) {
                   if (observed == o.first) {
                     out.new_config = o.second;
                     ++next.oscillate_net;
                   } else if (observed == o.second) {
                     out.new_config = o.first;
                     --next.oscillate_net;
                   } else {
                     return;
                   }
                   out.fired = true;
                   advance = next.oscillate_net >= static_cast<std::int32_t>(o.k);
                 },
                 [&](const Declare&) {
                   next.declared = true;
                   out.declared = true;
                   advance = true;
                 },
             },
             program.leaf_at(state.step).action);

  if (!advance) return {next, out};
  out.fired = true;
  next.oscillate_net = 0;
  ++next.step;
  if (!next.declared && !program.at_end(next) &&
      std::holds_alternative<Declare>(program.leaf_at(next.step).action)) {
    next.declared = true;
    out.declared = true;
    ++next.step;
  }
  return {next, out};
}

}  // namespace

std::pair<PrisonerState, VisitOutcome> visit(const PrisonerState& state, const Program& program,
                                             Config observed) {
  if (!program.forced_flip()) return base_visit(state, program, observed);
  if (index(observed) >= program.config_count()) {
    throw std::logic_error("observed configuration out of range for '" + program.label() + "'");
  }
  const unsigned parity = index(observed) % 2;
  const Config base_observed = config(index(observed) / 2);
  auto [next, out] = base_visit(state, program, base_observed);
  if (out.new_config != base_observed) {
    out.new_config = config(2u * index(out.new_config) + parity);
  } else {
    out.new_config = config(2u * index(base_observed) + (1 - parity));
  }
  return {next, out};
}

namespace {

std::string name_of(Config c, std::span<const std::string> names) {
  if (index(c) < names.size()) return names[index(c)];
  return std::to_string(index(c));
}

void render(std::ostringstream& out, const Instruction& ins, std::span<const std::string> names,
            int depth) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ');
  std::visit(overloaded{
                 [&](const Flip& f) { out << "FLIP " << name_of(f.from, names) << " -> " << name_of(f.to, names); },
                 [&](const FlipNotIn& f) {
                   out << "FLIP not{";
                   for (std::size_t i = 0; i < f.excluded.size(); ++i) {
                     out << (i ? "," : "") << name_of(f.excluded[i], names);
                   }
                   out << "} -> " << name_of(f.to, names);
                 },
                 [&](const See& s) { out << "SEE " << name_of(s.target, names); },
                 [&](const Oscillate& o) {
                   out << "OSCILLATE " << name_of(o.first, names) << " <-> " << name_of(o.second, names)
                       << " k=" << o.k;
                 },
                 [&](const Declare&) { out << "DECLARE"; },
                 [&](const Repeat& r) { out << "REPEAT " << r.count; },
             },
             ins.op);
  if (!ins.note.empty()) out << "    // " << ins.note;
  out << '\n';
  if (const auto* rep = std::get_if<Repeat>(&ins.op)) {
    for (const auto& inner : rep->body) render(out, inner, names, depth + 1);
  }
}

}  // namespace

std::string to_listing(const Program& program, std::span<const std::string> config_names) {
  std::ostringstream out;
  for (const auto& ins : program.body()) render(out, ins, config_names, 0);
  return out.str();
}

}  // namespace lockstep
