#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lockstep/program.hpp"
#include "lockstep/world.hpp"

namespace lockstep::test {

inline std::string param_name(std::string id, std::size_t index) {
  for (char& ch : id) {
    if (ch == '-') ch = '_';
  }
  return id + "_" + std::to_string(index);
}

/// Repeat counts of a program in pre-order.
inline void collect_repeats(const std::vector<Instruction>& body, std::vector<std::uint32_t>& out) {
  for (const auto& ins : body) {
    if (const auto* rep = std::get_if<Repeat>(&ins.op)) {
      out.push_back(rep->count);
      collect_repeats(rep->body, out);
    }
  }
}

inline std::vector<std::uint32_t> repeat_counts(const Program& p) {
  std::vector<std::uint32_t> out;
  collect_repeats(p.body(), out);
  return out;
}

/// Plays a fixed list of events; throws once it runs out.
class Fixed final : public Scheduler {
 public:
  explicit Fixed(std::vector<VisitEvent> events) : events_(std::move(events)) {}
  VisitEvent next(const WorldView&) override { return events_.at(at_++); }

 private:
  std::vector<VisitEvent> events_;
  std::size_t at_ = 0;
};

inline RunResult run_events(const ProtocolInstance& inst, std::vector<VisitEvent> events) {
  Fixed s(events);
  RunOptions o;
  o.max_steps = events.size();
  return run(inst, s, o);
}

}  // namespace lockstep::test
