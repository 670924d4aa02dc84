#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "ball_accel/ball_oracle.hpp"
#include "ball_accel/constants.hpp"
#include "ball_accel/objectives.hpp"

namespace ball_accel {

// a solving lambda (A + a) = a^2 for given A, i.e. the coupling weight of
// the proximal-point acceleration step.
double compute_a_lambda(double lambda, double a_total);

// One line-search oracle result: the proximal parameter, its coupling
// weight, the extrapolated query point y, and the ball-oracle answer z.
// Either z satisfies the sigma = 1/2 proximal residual bound with movement
// >= 11r/12, or early_solution is set (z is eps-optimal globally).
struct MsOracleResult {
  double lambda = 0.0;
  double a = 0.0;
  Eigen::VectorXd y;
  Eigen::VectorXd z;
  std::optional<Eigen::VectorXd> early_solution;
  double movement = 0.0;        // ||z - y||_M
  double sigma_residual = 0.0;  // ||z - (y - lambda M^+ grad f(z))||_M
  long long oracle_calls = 0;
};

// Binary search over the proximal parameter against a (delta, r)-ball
// oracle; delta is set internally to r/(12(1+Lu)) with u = 2(D+r)r/eps.
MsOracleResult ms_linesearch(const ComposedObjective& obj, const BallOracle& oracle,
                             double a_total, const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                             double dist_bound, double smoothness, double epsilon,
                             const Constants& constants, SolveStats& stats);

struct TraceRow {
  long long k = 0;
  double objective = 0.0;       // f(x_k) before the step
  double movement = 0.0;        // ||x_{k+1} - y_k||_M
  double lambda = 0.0;
  double a_total = 0.0;         // A_k after the step
  double sigma_residual = 0.0;
  double reg_value = 0.0;       // proximal term at x_{k+1}, when one is present
  bool early = false;
  long long oracle_calls = 0;   // consumed by this step
  long long linear_solves = 0;  // consumed by this step
};

struct SolverTrace {
  std::vector<TraceRow> rows;
  std::string status;  // converged | early_solution | max_iterations | trivial_by_smoothness | target_reached
  double final_objective = 0.0;
};

struct MsResult {
  Eigen::VectorXd x;
  SolverTrace trace;
  SolveStats stats;
};

struct MsOptions {
  std::optional<double> f_target;  // stop once f(x_k) <= f_target
  Constants constants;
};

// Accelerated minimization of a strictly convex, L-smooth f with initial
// distance bound R and initial gap bound eps0, down to additive accuracy
// eps. Returns the best iterate encountered.
MsResult ms_accelerate(const ComposedObjective& obj, const BallOracle& oracle,
                       const Eigen::VectorXd& x0, double radius_bound, double eps0, double eps,
                       double smoothness, const MsOptions& options = MsOptions{});

// Plain ball-oracle iteration x_{k+1} = oracle(x_k); the unaccelerated
// baseline with O((R/r) log(eps0/eps)) calls.
MsResult iterate_ball_baseline(const ComposedObjective& obj, const BallOracle& oracle,
                               const Eigen::VectorXd& x0, double eps0, double eps,
                               double radius_bound, const MsOptions& options = MsOptions{});

}  // namespace ball_accel
