#pragma once

#include <Eigen/Core>

#include "ball_accel/constants.hpp"
#include "ball_accel/linalg.hpp"
#include "ball_accel/objectives.hpp"

namespace ball_accel {

// Contract for a (delta, r)-ball optimization oracle over a function that
// is (r, c)-Hessian stable, mu-strongly convex and L-smooth in ||.||_M,
// queried at centers within dist_bound of the minimizer.
struct BallOracleSpec {
  double delta = 0.0;
  double radius = 0.0;
  double stability = 1.0;   // c >= 1
  double mu = 0.0;
  double smoothness = 0.0;  // L
  double dist_bound = 0.0;  // D

  void validate() const;
};

struct BallOracleOutput {
  Eigen::VectorXd point;
  long long linear_solves = 0;
  long long newton_iterations = 0;
};

// Accelerated Newton steps against the Hessian frozen at the center,
// each step a trust-region solve over the query ball. Returns a point
// within delta (in ||.||_M) of the exact ball-constrained minimizer.
BallOracleOutput accel_newton_ball(const ComposedObjective& obj, const Eigen::VectorXd& center,
                                   const BallOracleSpec& spec,
                                   const Constants& constants = Constants{});

// Reference oracle for testing: projected gradient descent on the M-ball,
// run until the step length drops below tol. Desk-scale only (d <= 3).
Eigen::VectorXd brute_force_ball(const ComposedObjective& obj, const Eigen::VectorXd& center,
                                 double radius, double tol);

// Oracle interface the accelerated loop consumes: radius is fixed,
// accuracy is chosen per call by the line search.
class BallOracle {
 public:
  virtual ~BallOracle() = default;
  virtual double radius() const = 0;
  virtual Eigen::VectorXd minimize(const Eigen::VectorXd& center, double delta,
                                   SolveStats& stats) const = 0;
};

class NewtonBallOracle final : public BallOracle {
 public:
  NewtonBallOracle(const ComposedObjective& obj, double radius, double stability, double mu,
                   double smoothness, double dist_bound, Constants constants = Constants{});

  double radius() const override { return radius_; }
  Eigen::VectorXd minimize(const Eigen::VectorXd& center, double delta,
                           SolveStats& stats) const override;

 private:
  const ComposedObjective& obj_;
  double radius_;
  double stability_;
  double mu_;
  double smoothness_;
  double dist_bound_;
  Constants constants_;
};

}  // namespace ball_accel
