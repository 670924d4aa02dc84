#pragma once

#include <json.hpp>
#include <string>

#include "ball_accel/ms_accel.hpp"
#include "ball_accel/solvers.hpp"

namespace ball_accel {

using Json = nlohmann::ordered_json;

// One structured document per run: config echo, status, counters, trace.
// schema_version 1. Identical config + seed reproduce the document byte for
// byte except the wall_time_sec field.
Json trace_to_json(const SolverTrace& trace);
Json stats_to_json(const SolveStats& stats);
Json report_document(const Json& config_echo, const std::string& status, double final_objective,
                     const SolveStats& stats, const SolverTrace& trace, double wall_time_sec);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace ball_accel
