#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "ball_accel/constants.hpp"
#include "ball_accel/ms_accel.hpp"
#include "ball_accel/objectives.hpp"

namespace ball_accel {

struct BaconConfig {
  double epsilon = 0.0;        // target additive accuracy for f
  Eigen::VectorXd x0;
  double eps0 = 0.0;           // initial gap bound f(x0) - f*
  double radius_bound = 0.0;   // R >= ||x0 - x*||_M
  double qsc = 0.0;            // M_qsc of f + the proximal regularizer (l2, z-space);
                               // 0 = derive from the regularized objective
  double smoothness = 0.0;     // L of f (l2, z-space == ||.||_M certificate)
  Constants constants;
  std::optional<double> f_target;     // optional early stop on the regularized objective
  std::optional<double> ball_radius;  // override r (default 1/qsc)
};

// Full pipeline: regularize f by eps/(55 R^2) * ||x - x0||_M^2, implement a
// ball oracle for the result by ball-constrained Newton, wrap it in the
// line-searched MS oracle, and accelerate. The output is eps-optimal for f.
MsResult ms_bacon(const ComposedObjective& f, const BaconConfig& cfg);

struct SolveReport {
  Eigen::VectorXd x;
  double objective = 0.0;  // task-native objective at x
  std::string status;
  SolverTrace trace;       // final (or only) accelerated run
  SolveStats stats;

  struct Phase {
    double eps_k = 0.0;
    double radius = 0.0;
    double qsc = 0.0;
    double smoothness = 0.0;
    double final_objective = 0.0;
    long long oracle_calls = 0;
    long long linear_solves = 0;
    std::string status;
  };
  std::vector<Phase> phases;  // lp regression only
};

SolveReport solve_logistic(const Eigen::MatrixXd& a, const Eigen::VectorXd& labels,
                           const Eigen::VectorXd& x0, double eps, double radius_bound,
                           const Constants& constants = Constants{});

// Minimizes ||Ax - b||_inf to additive eps through the scaled softmax
// surrogate on the [A; -A] stacking.
SolveReport solve_linf(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& x0, double eps, double radius_bound,
                       const Constants& constants = Constants{});

// Minimizes ||Ax - b||_p^p (p > 3) to (1 + delta) multiplicative accuracy by
// proximal phases with geometrically shrinking targets.
SolveReport solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double p, double delta,
                     const Constants& constants = Constants{});

// Minimum-norm least squares A^+ b through the seminorm machinery.
Eigen::VectorXd least_squares_init(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

// Damped-Newton reference minimizer (instrumentation and test reference;
// not part of the accelerated pipeline). Runs until the dual gradient norm
// falls below grad_tol. Returns the final objective value.
double reference_minimize(const ComposedObjective& obj, const Eigen::VectorXd& x0,
                          double grad_tol, int max_iters, Eigen::VectorXd* argmin = nullptr);

// Non-certified radius guess from one damped Newton step: 16 * step length.
double estimate_radius(const ComposedObjective& obj, const Eigen::VectorXd& x0);

}  // namespace ball_accel
