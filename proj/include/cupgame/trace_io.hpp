#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "cupgame/engine.hpp"

namespace cupgame {

inline constexpr const char* kTraceSchema = "cupgame.trace.v1";
inline constexpr const char* kBacklogCsvSchema = "cupgame.backlog.v1";

nlohmann::json rational_json(const Rational& r);
Rational rational_from_json(const nlohmann::json& j);

nlohmann::json trace_to_json(const GameTrace& trace);
// Rebuilds a Full trace; state_after of each round is recomputed and checked
// against the recorded backlog.
GameTrace trace_from_json(const nlohmann::json& j);

// Schema line, then header round,backlog_num,backlog_den,backlog.
void write_backlog_csv(std::ostream& os, const GameTrace& trace);

}  // namespace cupgame
