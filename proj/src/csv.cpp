#include "ball_accel/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ball_accel/log.hpp"

namespace ball_accel {

namespace {

bool parse_double(const std::string& cell, double* out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
  if (begin == end) return false;
  const auto res = std::from_chars(begin, end, *out);
  return res.ec == std::errc() && res.ptr == end;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

DenseCsv load_dense_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool skipped_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    const std::vector<std::string> cells = split_line(line);
    std::vector<double> values(cells.size());
    bool numeric = true;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (!parse_double(cells[j], &values[j])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty() && !skipped_header) {
        skipped_header = true;
        log_info("skipping non-numeric header row in " + path);
        continue;
      }
      throw std::runtime_error("non-numeric cell in " + path + " at line " +
                               std::to_string(line_no));
    }
    if (rows.empty()) {
      width = values.size();
      if (width < 2)
        throw std::runtime_error("need at least two columns (features and target) in " + path);
    } else if (values.size() != width) {
      throw std::runtime_error("ragged row in " + path + " at line " + std::to_string(line_no));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::runtime_error("empty data file: " + path);

  DenseCsv out;
  out.skipped_header = skipped_header;
  out.a.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width - 1));
  out.target.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j + 1 < width; ++j) out.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    out.target(static_cast<Eigen::Index>(i)) = rows[i][width - 1];
  }
  return out;
}

std::string emit_plotdata(const SolverTrace& trace) {
  std::string out = "k,f_gap,movement,cumulative_solves\n";
  if (trace.rows.empty()) return out;

  double best = trace.final_objective;
  for (const TraceRow& row : trace.rows) best = std::min(best, row.objective);

  char buf[160];
  double running = std::numeric_limits<double>::infinity();
  long long cumulative = 0;
  for (const TraceRow& row : trace.rows) {
    running = std::min(running, row.objective);
    cumulative += row.linear_solves;
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%lld\n", row.k, running - best, row.movement,
                  cumulative);
    out += buf;
  }
  return out;
}

}  // namespace ball_accel
