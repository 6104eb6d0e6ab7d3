#include "lockstep/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <limits>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "lockstep/cursor_graph.hpp"

namespace lockstep {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::False: return "false";
    case Verdict::True: return "true";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

Verdict operator&&(Verdict a, Verdict b) noexcept {
  if (a == Verdict::False || b == Verdict::False) return Verdict::False;
  if (a == Verdict::True && b == Verdict::True) return Verdict::True;
  return Verdict::Unknown;
}

Verdict operator!(Verdict v) noexcept {
  if (v == Verdict::Unknown) return v;
  return v == Verdict::True ? Verdict::False : Verdict::True;
}

std::uint64_t default_node_cap() {
  constexpr std::uint64_t kDefault = 10'000'000;
  const char* env = std::getenv("LOCKSTEP_NODE_CAP");
  if (env == nullptr || *env == '\0') return kDefault;
  std::uint64_t value = 0;
  const std::string_view text(env);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || value == 0) {
    throw std::invalid_argument("LOCKSTEP_NODE_CAP must be a positive integer");
  }
  return value;
}

bool ExploreReport::monitors_passed() const {
  return std::all_of(monitors.begin(), monitors.end(), [](const MonitorReport& m) { return m.passed; });
}

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
enum Status : std::uint8_t { kOpen = 0, kGoal = 1, kIncorrect = 2 };

}  // namespace

struct Explorer::Impl {
  struct Hash {
    const Impl* self;
    std::size_t operator()(std::uint32_t id) const { return std::hash<std::string_view>{}(self->key(id)); }
  };
  struct Eq {
    const Impl* self;
    bool operator()(std::uint32_t a, std::uint32_t b) const { return self->key(a) == self->key(b); }
  };

  const ProtocolInstance& inst;
  ExploreOptions opt;
  std::size_t n, r, labels, key_size;
  std::uint32_t cap;
  std::uint64_t node_cap;
  bool all_declare;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<CursorGraph> graphs;

  std::vector<unsigned char> arena;
  std::vector<std::uint32_t> parent, parent_label, depth;
  std::vector<std::uint8_t> status;
  std::vector<std::uint32_t> succ;
  std::unordered_set<std::uint32_t, Hash, Eq> ids{0, Hash{this}, Eq{this}};

  ExploreReport report;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> violation_at;  // (node, label or kNone)

  Impl(const ProtocolInstance& instance, ExploreOptions options)
      : inst(instance),
        opt(std::move(options)),
        n(instance.n),
        r(instance.r),
        labels(instance.n * instance.r),
        key_size(2 * instance.r + 9 * instance.n + instance.n * instance.r),
        cap(instance.win.visit_cap()),
        node_cap(opt.node_cap ? opt.node_cap : default_node_cap()),
        all_declare(instance.win.kind == WinCondition::Kind::AllMustDeclare) {
    validate(inst);
    if (cap > 255) throw UnsupportedParameter("explorer supports visit caps up to 255");
    for (Monitor* m : opt.monitors) {
      if (!m->stateless()) throw std::logic_error("monitor '" + std::string(m->id()) + "' needs a single run");
    }
    if (opt.symmetry) {
      std::vector<std::size_t> seen;
      for (std::size_t room = 0; room < r; ++room) {
        auto it = std::find_if(classes.begin(), classes.end(),
                               [&](const auto& cls) { return inst.start[cls.front()] == inst.start[room]; });
        if (it == classes.end()) {
          classes.push_back({room});
        } else {
          it->push_back(room);
        }
      }
    }
    if (opt.goal == Goal::AllFinished) {
      for (const auto& p : inst.programs) graphs.emplace_back(p);
    }
  }

  std::string_view key(std::uint32_t id) const {
    return {reinterpret_cast<const char*>(arena.data()) + static_cast<std::size_t>(id) * key_size, key_size};
  }

  void encode(const WorldState& s, unsigned char* out) const {
    for (Config c : s.rooms) {
      const std::uint16_t v = index(c);
      std::memcpy(out, &v, 2);
      out += 2;
    }
    for (const auto& p : s.prisoners) {
      std::memcpy(out, &p.step, 4);
      std::memcpy(out + 4, &p.oscillate_net, 4);
      out[8] = p.declared ? 1 : 0;
      out += 9;
    }
    for (std::uint32_t v : s.visits) *out++ = static_cast<unsigned char>(v);
  }

  WorldState decode(std::uint32_t id) const {
    const unsigned char* in = arena.data() + static_cast<std::size_t>(id) * key_size;
    WorldState s;
    s.rooms.resize(r);
    s.prisoners.resize(n);
    s.visits.resize(n * r);
    for (auto& c : s.rooms) {
      std::uint16_t v;
      std::memcpy(&v, in, 2);
      c = config(v);
      in += 2;
    }
    for (auto& p : s.prisoners) {
      std::memcpy(&p.step, in, 4);
      std::memcpy(&p.oscillate_net, in + 4, 4);
      p.declared = in[8] != 0;
      in += 9;
    }
    for (auto& v : s.visits) v = *in++;
    return s;
  }

  // Sorts rooms inside each start class; returns canonical index -> original index.
  std::vector<std::size_t> canonicalize(WorldState& s) const {
    std::vector<std::size_t> perm(r);
    for (std::size_t i = 0; i < r; ++i) perm[i] = i;
    if (!opt.symmetry) return perm;
    const auto column_less = [&](std::size_t a, std::size_t b) {
      if (s.rooms[a] != s.rooms[b]) return index(s.rooms[a]) < index(s.rooms[b]);
      for (std::size_t p = 0; p < n; ++p) {
        if (s.visit_count(p, a) != s.visit_count(p, b)) return s.visit_count(p, a) < s.visit_count(p, b);
      }
      return false;
    };
    for (const auto& cls : classes) {
      std::vector<std::size_t> order = cls;
      std::stable_sort(order.begin(), order.end(), column_less);
      for (std::size_t k = 0; k < cls.size(); ++k) perm[cls[k]] = order[k];
    }
    WorldState out = s;
    for (std::size_t i = 0; i < r; ++i) {
      out.rooms[i] = s.rooms[perm[i]];
      for (std::size_t p = 0; p < n; ++p) out.visits[p * r + i] = s.visits[p * r + perm[i]];
    }
    s = std::move(out);
    return perm;
  }

  bool finished_all(const WorldState& s) const {
    for (std::size_t p = 0; p < n; ++p) {
      const auto id = graphs[p].find(graphs[p].normalize(s.prisoners[p]));
      if (!id || graphs[p].can_act(*id)) return false;
    }
    return true;
  }

  std::uint8_t classify(const WorldState& s, const StepResult* res) const {
    if (res != nullptr && res->declaration && !res->correct) return kIncorrect;
    if (opt.goal == Goal::AllFinished) return finished_all(s) ? kGoal : kOpen;
    if (all_declare) return s.all_declared() ? kGoal : kOpen;
    return s.any_declared() ? kGoal : kOpen;
  }

  // Returns (id, fresh); id == kNone when the node cap is exhausted.
  std::pair<std::uint32_t, bool> intern(const WorldState& s, std::uint32_t from, std::uint32_t label,
                                        std::uint8_t st) {
    const std::size_t offset = arena.size();
    arena.resize(offset + key_size);
    encode(s, arena.data() + offset);
    const auto candidate = static_cast<std::uint32_t>(offset / key_size);
    if (auto it = ids.find(candidate); it != ids.end()) {
      arena.resize(offset);
      return {*it, false};
    }
    if (candidate >= node_cap) {
      arena.resize(offset);
      return {kNone, false};
    }
    ids.insert(candidate);
    parent.push_back(from);
    parent_label.push_back(label);
    depth.push_back(from == kNone ? 0 : depth[from] + 1);
    status.push_back(st);
    if (st == kGoal) ++report.correct_terminals;
    if (st == kIncorrect) ++report.incorrect_terminals;
    report.max_depth = std::max(report.max_depth, depth.back());
    return {candidate, true};
  }

  std::vector<std::uint32_t> labels_to(std::uint32_t id) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t at = id; parent[at] != kNone; at = parent[at]) out.push_back(parent_label[at]);
    std::reverse(out.begin(), out.end());
    return out;
  }

  // Maps labels taken in canonical frames back to concrete room indices.
  std::vector<VisitEvent> concretize(const std::vector<std::uint32_t>& path) const {
    WorldState concrete = initial_state(inst);
    WorldState canon = concrete;
    auto perm = canonicalize(canon);
    std::vector<VisitEvent> events;
    for (std::uint32_t label : path) {
      const VisitEvent e{label / r, perm[label % r]};
      events.push_back(e);
      apply_visit(inst, concrete, e, cap);
      canon = concrete;
      perm = canonicalize(canon);
    }
    return events;
  }

  Counterexample finite_trace(std::uint32_t id, std::uint32_t extra_label = kNone) const {
    auto path = labels_to(id);
    if (extra_label != kNone) path.push_back(extra_label);
    return Counterexample{replay(inst, concretize(path)), {}};
  }

  void record_violation(std::size_t m, std::string message, std::uint32_t node, std::uint32_t label) {
    auto& rep = report.monitors[m];
    if (!rep.passed) return;
    rep.passed = false;
    rep.message = std::move(message);
    violation_at[m] = {node, label};
  }

  void check_state_monitors(const WorldState& s, std::uint32_t id) {
    for (std::size_t m = 0; m < opt.monitors.size(); ++m) {
      if (!report.monitors[m].passed) continue;
      if (auto msg = opt.monitors[m]->check_state(s)) record_violation(m, *msg, id, kNone);
    }
  }

  void search() {
    report.label = inst.label;
    report.n = n;
    report.r = r;
    for (Monitor* m : opt.monitors) report.monitors.push_back(MonitorReport{std::string(m->id()), true, {}, {}});
    violation_at.assign(opt.monitors.size(), {kNone, kNone});

    WorldState init = initial_state(inst);
    const WorldState raw_init = init;
    canonicalize(init);
    intern(init, kNone, kNone, classify(init, nullptr));
    check_state_monitors(raw_init, 0);

    for (std::uint32_t id = 0; id < status.size(); ++id) {
      const bool limited = opt.depth_limit && depth[id] >= *opt.depth_limit;
      if (status[id] != kOpen || limited) {
        if (status[id] == kOpen) report.complete = false;
        succ.insert(succ.end(), labels, kNone);
        continue;
      }
      const WorldState s = decode(id);
      for (std::uint32_t label = 0; label < labels; ++label) {
        const VisitEvent e{label / r, label % r};
        WorldState t = s;
        const StepResult res = apply_visit(inst, t, e, cap);
        const std::uint8_t st = classify(t, &res);
        WorldState canon = t;
        canonicalize(canon);
        const auto [cid, fresh] = intern(canon, id, label, st);
        if (cid == kNone) {
          report.complete = false;
          succ.resize(static_cast<std::size_t>(id + 1) * labels, kNone);
          return;
        }
        succ.push_back(cid);
        ++report.edges;
        for (std::size_t m = 0; m < opt.monitors.size(); ++m) {
          if (!report.monitors[m].passed) continue;
          if (auto msg = opt.monitors[m]->check_edge(s, e, res, t)) record_violation(m, *msg, id, label);
        }
        if (fresh) check_state_monitors(t, cid);
      }
    }
  }

  // Fair-trap detection: an SCC of open states whose internal edges carry
  // every (prisoner, room) label admits a fair run that never reaches the goal.
  std::optional<std::vector<std::uint32_t>> find_fair_trap() const {
    const auto N = static_cast<std::uint32_t>(status.size());
    std::vector<std::uint32_t> idx(N, kNone), low(N, 0), comp(N, kNone);
    std::vector<std::uint8_t> on_stack(N, 0);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> calls;
    std::uint32_t counter = 0, comps = 0;
    const auto open_succ = [&](std::uint32_t v, std::uint32_t label) {
      const std::uint32_t w = succ[static_cast<std::size_t>(v) * labels + label];
      return (w != kNone && status[w] == kOpen) ? w : kNone;
    };
    for (std::uint32_t root = 0; root < N; ++root) {
      if (status[root] != kOpen || idx[root] != kNone) continue;
      calls.push_back({root, 0});
      idx[root] = low[root] = counter++;
      stack.push_back(root);
      on_stack[root] = 1;
      while (!calls.empty()) {
        auto& [v, next] = calls.back();
        if (next < labels) {
          const std::uint32_t w = open_succ(v, next++);
          if (w == kNone) continue;
          if (idx[w] == kNone) {
            idx[w] = low[w] = counter++;
            stack.push_back(w);
            on_stack[w] = 1;
            calls.push_back({w, 0});
          } else if (on_stack[w]) {
            low[v] = std::min(low[v], idx[w]);
          }
          continue;
        }
        const std::uint32_t done = v;
        calls.pop_back();
        if (!calls.empty()) low[calls.back().first] = std::min(low[calls.back().first], low[done]);
        if (low[done] != idx[done]) continue;
        std::vector<std::uint32_t> members;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comps;
          members.push_back(w);
        } while (w != done);
        std::vector<std::uint8_t> covered(labels, 0);
        for (std::uint32_t u : members) {
          for (std::uint32_t label = 0; label < labels; ++label) {
            const std::uint32_t x = open_succ(u, label);
            if (x != kNone && comp[x] == comps) covered[label] = 1;
          }
        }
        if (std::all_of(covered.begin(), covered.end(), [](std::uint8_t c) { return c != 0; })) {
          return lasso_cycle(members, comp, comps);
        }
        ++comps;
      }
    }
    return std::nullopt;
  }

  // Returns [entry, labels...]: a cycle from entry through every label, inside one SCC.
  std::vector<std::uint32_t> lasso_cycle(const std::vector<std::uint32_t>& members,
                                         const std::vector<std::uint32_t>& comp, std::uint32_t c) const {
    const std::uint32_t entry = *std::min_element(members.begin(), members.end(), [&](std::uint32_t a, std::uint32_t b) {
      return depth[a] != depth[b] ? depth[a] < depth[b] : a < b;
    });
    const auto inside = [&](std::uint32_t v, std::uint32_t label) {
      const std::uint32_t w = succ[static_cast<std::size_t>(v) * labels + label];
      return (w != kNone && status[w] == kOpen && comp[w] == c) ? w : kNone;
    };
    // Shortest internal path from `from` to a node satisfying `target`.
    const auto walk = [&](std::uint32_t from, auto&& target, std::vector<std::uint32_t>& out) {
      std::unordered_map<std::uint32_t, std::pair<std::uint32_t, std::uint32_t>> prev;
      std::deque<std::uint32_t> work{from};
      prev[from] = {kNone, kNone};
      while (!work.empty()) {
        const std::uint32_t v = work.front();
        work.pop_front();
        if (target(v)) {
          std::vector<std::uint32_t> seg;
          for (std::uint32_t at = v; prev[at].first != kNone; at = prev[at].first) seg.push_back(prev[at].second);
          out.insert(out.end(), seg.rbegin(), seg.rend());
          return v;
        }
        for (std::uint32_t label = 0; label < labels; ++label) {
          const std::uint32_t w = inside(v, label);
          if (w != kNone && !prev.count(w)) {
            prev[w] = {v, label};
            work.push_back(w);
          }
        }
      }
      throw std::logic_error("lasso construction left its component");
    };
    std::vector<std::uint32_t> cycle{entry};
    std::uint32_t at = entry;
    for (std::uint32_t label = 0; label < labels; ++label) {
      at = walk(at, [&](std::uint32_t v) { return inside(v, label) != kNone; }, cycle);
      cycle.push_back(label);
      at = inside(at, label);
    }
    walk(at, [&](std::uint32_t v) { return v == entry; }, cycle);
    return cycle;
  }

  void analyse() {
    const auto N = static_cast<std::uint32_t>(status.size());
    report.states = N;
    if (report.incorrect_terminals > 0) {
      report.safe = Verdict::False;
      std::uint32_t worst = kNone;
      for (std::uint32_t v = 0; v < N && worst == kNone; ++v) {
        if (status[v] == kIncorrect) worst = v;
      }
      report.unsafe = finite_trace(worst);
    } else {
      report.safe = report.complete ? Verdict::True : Verdict::Unknown;
    }
    report.prob_eps = report.safe && (report.correct_terminals > 0 ? Verdict::True
                                      : report.complete         ? Verdict::False
                                                                : Verdict::Unknown);

    for (std::size_t m = 0; m < report.monitors.size(); ++m) {
      if (report.monitors[m].passed) continue;
      report.monitors[m].trace = finite_trace(violation_at[m].first, violation_at[m].second);
    }
    if (!report.complete) {
      report.prob1 = report.safe && Verdict::Unknown;
      return;
    }

    // Backward reachability to the goal.
    std::vector<std::uint32_t> offsets(N + 1, 0);
    for (std::uint32_t v = 0; v < N; ++v) {
      if (status[v] != kOpen) continue;
      for (std::uint32_t label = 0; label < labels; ++label) ++offsets[succ[static_cast<std::size_t>(v) * labels + label] + 1];
    }
    for (std::uint32_t v = 0; v < N; ++v) offsets[v + 1] += offsets[v];
    std::vector<std::uint32_t> preds(offsets[N]);
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (std::uint32_t v = 0; v < N; ++v) {
      if (status[v] != kOpen) continue;
      for (std::uint32_t label = 0; label < labels; ++label) {
        preds[fill[succ[static_cast<std::size_t>(v) * labels + label]]++] = v;
      }
    }
    std::vector<std::uint32_t> dist(N, kNone);
    std::deque<std::uint32_t> work;
    for (std::uint32_t v = 0; v < N; ++v) {
      if (status[v] == kGoal) {
        dist[v] = 0;
        work.push_back(v);
      }
    }
    while (!work.empty()) {
      const std::uint32_t v = work.front();
      work.pop_front();
      for (std::uint32_t k = offsets[v]; k < offsets[v + 1]; ++k) {
        const std::uint32_t u = preds[k];
        if (dist[u] == kNone) {
          dist[u] = dist[v] + 1;
          work.push_back(u);
        }
      }
    }
    std::uint32_t bound = 0;
    std::uint32_t stuck = kNone;
    for (std::uint32_t v = 0; v < N; ++v) {
      if (status[v] != kOpen) continue;
      if (dist[v] == kNone) {
        if (stuck == kNone) stuck = v;
      } else {
        bound = std::max(bound, dist[v]);
      }
    }
    if (stuck != kNone) {
      report.prob1 = Verdict::False;
      report.stuck = finite_trace(stuck);
    } else {
      report.prob1 = report.safe;
      report.prob1_bound = bound;
    }

    if (opt.symmetry) {
      report.live = Verdict::Unknown;
      return;
    }
    if (auto cycle = find_fair_trap()) {
      report.live = Verdict::False;
      const std::uint32_t entry = cycle->front();
      auto prefix = labels_to(entry);
      const std::size_t split = prefix.size();
      prefix.insert(prefix.end(), cycle->begin() + 1, cycle->end());
      auto records = replay(inst, concretize(prefix));
      Counterexample cx;
      cx.prefix.assign(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(split));
      cx.cycle.assign(records.begin() + static_cast<std::ptrdiff_t>(split), records.end());
      report.unlive = std::move(cx);
    } else {
      report.live = Verdict::True;
    }
  }
};

Explorer::Explorer(const ProtocolInstance& instance, ExploreOptions options)
    : impl_(std::make_unique<Impl>(instance, std::move(options))) {
  const auto t0 = std::chrono::steady_clock::now();
  impl_->search();
  impl_->analyse();
  impl_->report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Explorer::~Explorer() = default;
Explorer::Explorer(Explorer&&) noexcept = default;
Explorer& Explorer::operator=(Explorer&&) noexcept = default;

const ExploreReport& Explorer::report() const { return impl_->report; }

bool Explorer::contains(const WorldState& state) const {
  WorldState s = state;
  for (auto& v : s.visits) v = std::min(v, impl_->cap);
  impl_->canonicalize(s);
  auto& arena = impl_->arena;
  const std::size_t offset = arena.size();
  arena.resize(offset + impl_->key_size);
  impl_->encode(s, arena.data() + offset);
  const bool found = impl_->ids.count(static_cast<std::uint32_t>(offset / impl_->key_size)) > 0;
  arena.resize(offset);
  return found;
}

ExploreReport explore(const ProtocolInstance& instance, ExploreOptions options) {
  return Explorer(instance, std::move(options)).report();
}

Guarantee strongest_class(const ExploreReport& report) {
  if (report.safe != Verdict::True) return Guarantee::Unclaimed;
  if (report.live == Verdict::True) return Guarantee::Winning;
  if (report.prob1 == Verdict::True) return Guarantee::Prob1;
  if (report.prob_eps == Verdict::True) return Guarantee::ProbEps;
  return Guarantee::Unclaimed;
}

Verdict conforms(Guarantee claimed, const ExploreReport& report) {
  switch (claimed) {
    case Guarantee::Winning: return report.safe && report.live;
    case Guarantee::Prob1: return report.safe && report.prob1;
    case Guarantee::ProbEps: return report.safe && report.prob_eps;
    case Guarantee::KnowledgeOnly: return Verdict::Unknown;
    case Guarantee::Unclaimed: return Verdict::True;
  }
  return Verdict::Unknown;
}

namespace {

class KnowledgeMonitor final : public Monitor {
 public:
  explicit KnowledgeMonitor(const ProtocolInstance& inst) : inst_(inst) {}
  std::string_view id() const override { return "knowledge"; }
  std::optional<std::string> check_state(const WorldState& s) override {
    for (std::size_t p = 0; p < s.n(); ++p) {
      if (inst_.programs[p].at_end(s.prisoners[p]) && !row_full(s, p)) {
        return "prisoner " + std::to_string(p) + " finished without visiting every room";
      }
    }
    return std::nullopt;
  }

 private:
  const ProtocolInstance& inst_;
};

}  // namespace

KnowledgeReport check_knowledge(const ProtocolInstance& instance, ExploreOptions options) {
  KnowledgeMonitor knowledge(instance);
  options.goal = Goal::AllFinished;
  options.monitors.insert(options.monitors.begin(), &knowledge);
  KnowledgeReport out;
  out.explore = explore(instance, std::move(options));
  const MonitorReport& k = out.explore.monitors.front();
  out.knows = k.passed ? (out.explore.complete ? Verdict::True : Verdict::Unknown) : Verdict::False;
  out.eventually = out.explore.live;
  if (!k.passed) {
    out.counterexample = k.trace;
  } else if (out.explore.unlive) {
    out.counterexample = out.explore.unlive;
  }
  return out;
}

}  // namespace lockstep
