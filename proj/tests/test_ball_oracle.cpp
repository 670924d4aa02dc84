#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "ball_accel/ball_oracle.hpp"
#include "ball_accel/rng.hpp"
#include "ball_accel/solvers.hpp"
#include "ball_accel/synthetic.hpp"
#include "test_helpers.hpp"

using namespace ball_accel;

namespace {

// f(x) = ||x - target||^2 via the squared loss (A = I, b = target, M = I).
ComposedObjective quadratic_objective(const Eigen::VectorXd& target) {
  const Eigen::Index d = target.size();
  return ComposedObjective(Eigen::MatrixXd::Identity(d, d), target, InnerLoss::power(2.0));
}

BallOracleSpec quadratic_spec(double delta, double r, double dist_bound) {
  BallOracleSpec spec;
  spec.delta = delta;
  spec.radius = r;
  spec.stability = 1.0;  // exact quadratic
  spec.mu = 2.0;
  spec.smoothness = 2.0;
  spec.dist_bound = dist_bound;
  return spec;
}

}  // namespace

TEST_CASE("ball-constrained quadratic is a radial projection") {
  Eigen::VectorXd target = Eigen::VectorXd::Zero(2);
  const ComposedObjective obj = quadratic_objective(target);
  Eigen::VectorXd center(2);
  center << 2, 0;

  const double delta = 1e-6;
  const BallOracleOutput out = accel_newton_ball(obj, center, quadratic_spec(delta, 1.0, 2.0));
  Eigen::VectorXd expect(2);
  expect << 1, 0;
  CHECK((out.point - expect).norm() <= delta);
  CHECK(out.linear_solves > 0);
}

TEST_CASE("inactive constraint returns the global minimizer") {
  Rng rng(5);
  const Eigen::VectorXd target = rng.normal_vector(3);
  const ComposedObjective obj = quadratic_objective(target);
  const Eigen::VectorXd center = target + 0.3 * rng.normal_vector(3).normalized();
  const double delta = 1e-7;
  const BallOracleOutput out = accel_newton_ball(obj, center, quadratic_spec(delta, 1.0, 1.0));
  CHECK((out.point - target).norm() <= delta);
}

TEST_CASE("brute force oracle sanity") {
  Eigen::VectorXd target = Eigen::VectorXd::Zero(2);
  const ComposedObjective obj = quadratic_objective(target);
  Eigen::VectorXd center(2);
  center << 2, 0;

  const Eigen::VectorXd z = brute_force_ball(obj, center, 1.0, 1e-9);
  Eigen::VectorXd expect(2);
  expect << 1, 0;
  CHECK((z - expect).norm() <= 1e-6);
  CHECK(obj.value(z) <= obj.value(center));

  // Boundary characterization: grad f(z) is anti-parallel to M(z - center).
  const Eigen::VectorXd g = obj.gradient(z);
  const double lambda = obj.seminorm_op().dual_seminorm(g) / 1.0;
  const Eigen::VectorXd residual = g + lambda * obj.seminorm_op().apply(z - center);
  CHECK(residual.norm() <= 1e-5);

  Eigen::VectorXd big(4);
  big.setZero();
  CHECK_THROWS_WITH_AS(brute_force_ball(quadratic_objective(big), big, 1.0, 1e-6),
                       "reference oracle is desk-scale only", std::invalid_argument);
}

TEST_CASE("2d logistic oracle matches brute force") {
  // Fixed 4-row instance.
  Eigen::MatrixXd a(4, 2);
  a << 1.0, 0.3, -0.4, 1.1, 0.8, -0.9, -1.2, -0.2;
  Eigen::VectorXd labels(4);
  labels << 1, -1, 1, -1;
  const ComposedObjective obj(a, Eigen::VectorXd::Zero(4), InnerLoss::logistic(labels));

  const Eigen::VectorXd center = Eigen::VectorXd::Zero(2);
  const double r = 1.0;  // = qsc radius of the logistic loss
  const double delta = 1e-4;

  Eigen::VectorXd x_star;
  reference_minimize(obj, center, 1e-12, 200, &x_star);
  const double dist = obj.seminorm_op().seminorm(center - x_star);

  BallOracleSpec spec;
  spec.delta = delta;
  spec.radius = r;
  spec.stability = std::exp(1.0);
  // Local strong convexity over the ball, discounted by the stability factor.
  const PencilSolver pencil(obj.hessian(center), obj.seminorm_op());
  spec.mu = pencil.eigenvalues().minCoeff() / std::exp(1.0);
  spec.smoothness = 1.0;
  spec.dist_bound = std::max(dist * 1.1, r);

  const BallOracleOutput out = accel_newton_ball(obj, center, spec);
  const Eigen::VectorXd ref = brute_force_ball(obj, center, r, 1e-8);
  CHECK(obj.seminorm_op().seminorm(out.point - ref) <= delta);
}

TEST_CASE("oracle contract on random regularized instances") {
  Rng rng(2025);
  long long worst_solves = 0;
  double worst_budget = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + static_cast<int>(rng.below(2));
    const int n = d + 2 + static_cast<int>(rng.below(3));
    LogisticData data = synthetic_logistic(n, d, 1000 + t);
    const double weight = 0.05;
    const Eigen::VectorXd center = rng.normal_vector(d);
    const ComposedObjective obj =
        ComposedObjective(data.a, Eigen::VectorXd::Zero(n), InnerLoss::logistic(data.labels))
            .with_regularizer(weight, center);

    const double r = std::min(1.0, obj.qsc_radius());
    const double delta = 1e-5;

    Eigen::VectorXd x_star;
    reference_minimize(obj, center, 1e-12, 300, &x_star);
    const double dist = obj.seminorm_op().seminorm(center - x_star);

    BallOracleSpec spec;
    spec.delta = delta;
    spec.radius = r;
    spec.stability = std::exp(1.0);
    spec.mu = 2.0 * weight;
    spec.smoothness = 1.0 + 2.0 * weight;
    spec.dist_bound = std::max(dist * 1.05, 0.1);

    const BallOracleOutput out = accel_newton_ball(obj, center, spec);
    const double tol = 1e-7;
    const Eigen::VectorXd ref = brute_force_ball(obj, center, r, tol);
    CHECK(obj.seminorm_op().seminorm(out.point - ref) <= delta + 2.0 * tol);

    // Distance never grows beyond the inexactness allowance.
    CHECK(obj.seminorm_op().seminorm(out.point - x_star) <=
          obj.seminorm_op().seminorm(center - x_star) + 2.0 * delta);

    // Boundary optimality characterization within the inexactness budget.
    const double moved = obj.seminorm_op().seminorm(out.point - center);
    if (moved >= r - 10.0 * delta) {
      const Eigen::VectorXd g = obj.gradient(out.point);
      const double lambda = r / obj.seminorm_op().dual_seminorm(g);
      const Eigen::VectorXd shifted =
          center - lambda * obj.seminorm_op().pinv_apply(g);
      CHECK(obj.seminorm_op().seminorm(out.point - shifted) <= 3.0 * delta);
    }

    // Complexity accounting vs the c log^2(kappa (D+r) c / delta) shape.
    const double kappa = spec.smoothness / spec.mu;
    const double log_term =
        std::log(kappa * (spec.dist_bound + r) * spec.stability / spec.delta);
    const double budget = spec.stability * log_term * log_term;
    worst_solves = std::max(worst_solves, out.linear_solves);
    worst_budget = std::max(worst_budget, static_cast<double>(out.linear_solves) / budget);
    CHECK(static_cast<double>(out.linear_solves) <= 40.0 * budget);
  }
  MESSAGE("worst solves per oracle call: ", worst_solves, ", worst budget ratio: ", worst_budget);
}

TEST_CASE("spec validation") {
  const ComposedObjective obj = quadratic_objective(Eigen::VectorXd::Zero(2));
  BallOracleSpec spec = quadratic_spec(1e-3, 1.0, 1.0);
  spec.delta = 2.0;  // delta > r
  CHECK_THROWS_AS(accel_newton_ball(obj, Eigen::VectorXd::Zero(2), spec), std::invalid_argument);
  spec = quadratic_spec(1e-3, 1.0, 1.0);
  spec.stability = 0.5;
  CHECK_THROWS_AS(accel_newton_ball(obj, Eigen::VectorXd::Zero(2), spec), std::invalid_argument);
  spec = quadratic_spec(1e-3, 1.0, 1.0);
  spec.mu = 3.0;  // mu > L
  CHECK_THROWS_AS(accel_newton_ball(obj, Eigen::VectorXd::Zero(2), spec), std::invalid_argument);
}
