#include "lockstep/transcript.hpp"

#include <algorithm>

namespace lockstep {

std::string render(const Transcript& t) {
  if (t.empty()) return "-";
  std::string out;
  for (const auto& e : t) {
    if (!out.empty()) out += '/';
    out += "p" + std::to_string(e.prisoner) + "#" + std::to_string(e.k);
  }
  return out;
}

bool is_prefix(const Transcript& a, const Transcript& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

std::size_t certified_rooms(const TranscriptKnowledge& kn, std::size_t n) {
  std::vector<const Transcript*> certified;
  std::vector<std::uint8_t> named(n);
  for (const Transcript& t : kn.seen) {
    const bool ok = std::any_of(kn.seen.begin(), kn.seen.end(), [&](const Transcript& u) {
      if (u.size() <= t.size() || !is_prefix(t, u)) return false;
      std::fill(named.begin(), named.end(), 0);
      for (std::size_t i = t.size(); i < u.size(); ++i) {
        if (u[i].prisoner < n) named[u[i].prisoner] = 1;
      }
      return std::all_of(named.begin(), named.end(), [](std::uint8_t b) { return b != 0; });
    });
    if (ok) certified.push_back(&t);
  }
  // In prefix order an antichain takes at most one element below each maximal one.
  std::size_t maximal = 0;
  for (const Transcript* t : certified) {
    const bool below = std::any_of(certified.begin(), certified.end(), [&](const Transcript* u) {
      return u != t && u->size() > t->size() && is_prefix(*t, *u);
    });
    maximal += !below;
  }
  return maximal;
}

TranscriptVisit transcript_visit(TranscriptKnowledge& kn, const Transcript& room, std::size_t prisoner,
                                 std::size_t n, std::size_t r) {
  TranscriptVisit out{room, false};
  out.transcript.push_back({prisoner, ++kn.visits});
  if (std::find(kn.seen.begin(), kn.seen.end(), out.transcript) == kn.seen.end()) kn.seen.push_back(out.transcript);
  out.declare = certified_rooms(kn, n) >= r;
  return out;
}

TranscriptRun run_transcript(std::size_t n, std::vector<Transcript> prefixes,
                             const std::function<VisitEvent(std::uint64_t)>& schedule, std::uint64_t max_steps,
                             bool keep_log) {
  const std::size_t r = prefixes.size();
  if (n == 0 || r == 0) throw std::invalid_argument("transcript protocol needs n, r >= 1");
  TranscriptRun run;
  run.rooms = std::move(prefixes);
  run.visits.assign(n * r, 0);
  std::vector<TranscriptKnowledge> kn(n);
  for (std::uint64_t step = 1; step <= max_steps; ++step) {
    const VisitEvent e = schedule(step - 1);
    if (e.prisoner >= n || e.room >= r) throw std::logic_error("visit event out of range");
    const std::string before = keep_log ? render(run.rooms[e.room]) : std::string();
    auto v = transcript_visit(kn[e.prisoner], run.rooms[e.room], e.prisoner, n, r);
    run.rooms[e.room] = std::move(v.transcript);
    ++run.visits[e.prisoner * r + e.room];
    if (keep_log) {
      run.log.push_back("#" + std::to_string(step) + " p" + std::to_string(e.prisoner) + " -> room " +
                        std::to_string(e.room) + ": " + before + " -> " + render(run.rooms[e.room]) +
                        (v.declare ? " DECLARE" : ""));
    }
    run.step = step;
    if (v.declare) {
      run.declared = true;
      run.declarer = e.prisoner;
      run.correct = std::all_of(run.visits.begin(), run.visits.end(), [](std::uint32_t c) { return c > 0; });
      return run;
    }
  }
  return run;
}

namespace {

struct SearchState {
  std::vector<Transcript> rooms;
  std::vector<TranscriptKnowledge> kn;
  std::vector<std::uint32_t> visits;
};

void dfs(SearchState& s, std::size_t n, std::size_t r, std::size_t depth, TranscriptSearch& out) {
  ++out.schedules;
  if (depth == 0) return;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t room = 0; room < r; ++room) {
      SearchState t = s;
      auto v = transcript_visit(t.kn[p], t.rooms[room], p, n, r);
      t.rooms[room] = std::move(v.transcript);
      ++t.visits[p * r + room];
      if (v.declare) {
        ++out.schedules;
        ++out.declarations;
        out.incorrect += std::any_of(t.visits.begin(), t.visits.end(), [](std::uint32_t c) { return c == 0; });
        continue;
      }
      dfs(t, n, r, depth - 1, out);
    }
  }
}

}  // namespace

TranscriptSearch exhaustive_transcript_search(std::size_t n, std::size_t r, std::size_t max_prefix,
                                              std::uint64_t max_k, std::size_t depth) {
  std::vector<TranscriptEntry> alphabet;
  for (std::size_t p = 0; p <= n; ++p) {
    for (std::uint64_t k = 1; k <= max_k; ++k) alphabet.push_back({p, k});
  }
  TranscriptSearch out;
  std::vector<Transcript> prefixes(r);
  // Enumerate prefix tuples room by room with a shared length budget.
  const std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t room, std::size_t budget) {
    if (room == r) {
      ++out.prefix_sets;
      SearchState s{prefixes, std::vector<TranscriptKnowledge>(n), std::vector<std::uint32_t>(n * r, 0)};
      dfs(s, n, r, depth, out);
      return;
    }
    const std::function<void(std::size_t)> extend = [&](std::size_t left) {
      choose(room + 1, left);
      if (left == 0) return;
      for (const auto& e : alphabet) {
        prefixes[room].push_back(e);
        extend(left - 1);
        prefixes[room].pop_back();
      }
    };
    extend(budget);
  };
  choose(0, max_prefix);
  return out;
}

}  // namespace lockstep
