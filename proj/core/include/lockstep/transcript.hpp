#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lockstep/world.hpp"

namespace lockstep {

/// One transcript entry: a prisoner name (index; forged entries may use any
/// index) and that prisoner's visit counter.
struct TranscriptEntry {
  std::size_t prisoner = 0;
  std::uint64_t k = 0;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
  friend auto operator<=>(const TranscriptEntry&, const TranscriptEntry&) = default;
};

/// A room's wall: append-only list of entries, starting with an arbitrary
/// finite prefix.
using Transcript = std::vector<TranscriptEntry>;

/// "p0#1/p1#1"; the empty transcript renders as "-".
std::string render(const Transcript& t);

bool is_prefix(const Transcript& a, const Transcript& b);

/// What one prisoner remembers: every transcript he left behind.
struct TranscriptKnowledge {
  std::uint64_t visits = 0;
  std::vector<Transcript> seen;  // distinct, in order of first appearance
};

struct TranscriptVisit {
  Transcript transcript;
  bool declare = false;
};

/// Appends (prisoner, visits so far) to `room` and records the result.
/// Declares once the prisoner holds r pairwise non-prefix transcripts each of
/// which he later saw extended by entries naming all n prisoners.
TranscriptVisit transcript_visit(TranscriptKnowledge& knowledge, const Transcript& room, std::size_t prisoner,
                                 std::size_t n, std::size_t r);

/// Number of pairwise non-prefix remembered transcripts whose later extension
/// names every prisoner (the declaration test compares this with r).
std::size_t certified_rooms(const TranscriptKnowledge& knowledge, std::size_t n);

struct TranscriptRun {
  bool declared = false;
  bool correct = false;
  std::uint64_t step = 0;  // declaring step, or steps taken
  std::size_t declarer = 0;
  std::vector<Transcript> rooms;
  std::vector<std::uint32_t> visits;  // prisoner x room
  std::vector<std::string> log;       // one line per event
};

/// Runs until the first declaration or `max_steps` events.
TranscriptRun run_transcript(std::size_t n, std::vector<Transcript> prefixes,
                             const std::function<VisitEvent(std::uint64_t)>& schedule, std::uint64_t max_steps,
                             bool keep_log = false);

struct TranscriptSearch {
  std::uint64_t prefix_sets = 0;
  std::uint64_t schedules = 0;  // explored event sequences (including cut-off ones)
  std::uint64_t declarations = 0;
  std::uint64_t incorrect = 0;
};

/// Every schedule of length <= depth, from every choice of room prefixes whose
/// combined length is <= max_prefix over entries (name in [0, n], k in [1, max_k]).
/// Name n stands for a prisoner who does not exist.
TranscriptSearch exhaustive_transcript_search(std::size_t n, std::size_t r, std::size_t max_prefix,
                                              std::uint64_t max_k, std::size_t depth);

}  // namespace lockstep
