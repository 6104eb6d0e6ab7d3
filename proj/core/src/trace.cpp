#include "lockstep/trace.hpp"

#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace lockstep {

using nlohmann::ordered_json;

std::string to_jsonl(const TraceRecord& record) {
  ordered_json j;
  j["step"] = record.step;
  j["prisoner"] = record.prisoner;
  j["room"] = record.room;
  j["config_before"] = record.config_before;
  j["config_after"] = record.config_after;
  j["fired"] = record.fired;
  j["declared"] = record.declared;
  return j.dump();
}

TraceRecord parse_jsonl(std::string_view line) {
  try {
    const auto j = ordered_json::parse(line);
    TraceRecord r;
    r.step = j.at("step").get<std::uint64_t>();
    r.prisoner = j.at("prisoner").get<std::size_t>();
    r.room = j.at("room").get<std::size_t>();
    r.config_before = j.at("config_before").get<std::string>();
    r.config_after = j.at("config_after").get<std::string>();
    r.fired = j.at("fired").get<bool>();
    r.declared = j.at("declared").get<bool>();
    return r;
  } catch (const ordered_json::exception& e) {
    throw std::invalid_argument(std::string("bad trace line: ") + e.what());
  }
}

std::string to_text(const TraceRecord& record) {
  std::string s = "#" + std::to_string(record.step) + " p" + std::to_string(record.prisoner) + " -> room " +
                  std::to_string(record.room) + ": " + record.config_before + " -> " + record.config_after;
  if (record.fired) s += " fired";
  if (record.declared) s += " DECLARE";
  return s;
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace, TraceFormat format) {
  for (const auto& rec : trace) out << (format == TraceFormat::Jsonl ? to_jsonl(rec) : to_text(rec)) << '\n';
}

}  // namespace lockstep
