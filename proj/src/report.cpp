#include "ball_accel/report.hpp"

#include <fstream>
#include <stdexcept>

namespace ball_accel {

Json trace_to_json(const SolverTrace& trace) {
  Json rows = Json::array();
  for (const TraceRow& row : trace.rows) {
    Json r;
    r["k"] = row.k;
    r["f"] = row.objective;
    r["movement"] = row.movement;
    r["lambda"] = row.lambda;
    r["A"] = row.a_total;
    r["sigma_residual"] = row.sigma_residual;
    r["early"] = row.early;
    r["oracle_calls"] = row.oracle_calls;
    r["linear_solves"] = row.linear_solves;
    rows.push_back(std::move(r));
  }
  return rows;
}

Json stats_to_json(const SolveStats& stats) {
  Json j;
  j["oracle_calls"] = stats.oracle_calls;
  j["linear_solves"] = stats.linear_solves;
  j["gradient_evals"] = stats.gradient_evals;
  return j;
}

Json report_document(const Json& config_echo, const std::string& status, double final_objective,
                     const SolveStats& stats, const SolverTrace& trace, double wall_time_sec) {
  Json doc;
  doc["schema_version"] = 1;
  doc["config"] = config_echo;
  doc["status"] = status;
  doc["final_objective"] = final_objective;
  doc["oracle_calls"] = stats.oracle_calls;
  doc["linear_solves"] = stats.linear_solves;
  doc["iterations"] = trace.rows.size();
  doc["trace"] = trace_to_json(trace);
  doc["wall_time_sec"] = wall_time_sec;
  return doc;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << contents;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace ball_accel
