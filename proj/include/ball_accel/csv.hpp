#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>

#include "ball_accel/ms_accel.hpp"

namespace ball_accel {

struct DenseCsv {
  Eigen::MatrixXd a;       // all columns but the last
  Eigen::VectorXd target;  // last column (b or labels)
  bool skipped_header = false;
};

// Rectangular numeric CSV, comma-separated, optional non-numeric header
// row (skipped with a notice). Errors carry the offending line number.
DenseCsv load_dense_csv(const std::string& path);

// Per-iteration plot rows "k,f_gap,movement,cumulative_solves" with the gap
// taken against the best value seen in the trace (running best, so the
// column is nonincreasing). Traceless input yields just the header.
std::string emit_plotdata(const SolverTrace& trace);

}  // namespace ball_accel
