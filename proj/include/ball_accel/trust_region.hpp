#pragma once

#include <Eigen/Core>

#include "ball_accel/linalg.hpp"

namespace ball_accel {

// min over the M-ball of radius r around `center` of Q(x) = -g'x + x'Hx/2,
// solved to M-seminorm accuracy `accuracy` by bisecting the multiplier of
// the ball constraint. mu, smoothness certify mu*M <= H <= smoothness*M.
struct TrustRegionProblem {
  Eigen::VectorXd center;
  double radius = 0.0;
  Eigen::VectorXd linear;
  Eigen::MatrixXd quadratic;
  std::shared_ptr<const SeminormOperator> seminorm;
  double accuracy = 0.0;
  double mu = 0.0;
  double smoothness = 0.0;

  void validate() const;
};

struct TrustRegionResult {
  Eigen::VectorXd point;
  double lambda = 0.0;
  bool interior = false;
  long long solves = 0;  // linear system solves consumed
};

TrustRegionResult solve_tr(const TrustRegionProblem& prob);

// Same, reusing a pencil factorization of (H, M); this is the hot path the
// ball oracle takes, solving many subproblems against one frozen Hessian.
TrustRegionResult solve_tr(const TrustRegionProblem& prob, const PencilSolver& pencil);

}  // namespace ball_accel
