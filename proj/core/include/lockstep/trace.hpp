#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lockstep/world.hpp"

namespace lockstep {

/// One JSON object per line:
/// {"step":1,"prisoner":0,"room":0,"config_before":"OFF","config_after":"ON","fired":true,"declared":false}
std::string to_jsonl(const TraceRecord& record);
/// Inverse of to_jsonl. Throws std::invalid_argument on malformed input.
TraceRecord parse_jsonl(std::string_view line);

/// Human-readable single line, e.g. "#3 p1 -> room 0: OFF -> ON fired".
std::string to_text(const TraceRecord& record);

enum class TraceFormat { Text, Jsonl };

void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace, TraceFormat format);

}  // namespace lockstep
