#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "ball_accel/trust_region.hpp"
#include "ball_accel/rng.hpp"
#include "test_helpers.hpp"

using namespace ball_accel;
using test_helpers::random_psd;
using test_helpers::random_shared_kernel_psd;
using test_helpers::tr_model;
using test_helpers::tr_reference_minimizer;

namespace {

TrustRegionProblem make_1d(double g, double h, double radius) {
  TrustRegionProblem prob;
  prob.center = Eigen::VectorXd::Zero(1);
  prob.radius = radius;
  prob.linear = Eigen::VectorXd::Constant(1, g);
  prob.quadratic = Eigen::MatrixXd::Constant(1, 1, h);
  prob.seminorm = std::make_shared<SeminormOperator>(Eigen::MatrixXd::Identity(1, 1));
  prob.accuracy = 1e-9;
  prob.mu = h;
  prob.smoothness = h;
  return prob;
}

// 1-d grid search refinement, the independent oracle for the frozen values.
double grid_minimize_1d(double g, double h, double lo, double hi) {
  for (int round = 0; round < 12; ++round) {
    double best = lo;
    double best_q = -g * lo + 0.5 * h * lo * lo;
    const int steps = 400;
    for (int i = 0; i <= steps; ++i) {
      const double x = lo + (hi - lo) * i / steps;
      const double q = -g * x + 0.5 * h * x * x;
      if (q < best_q) {
        best_q = q;
        best = x;
      }
    }
    const double width = (hi - lo) / steps;
    lo = std::max(lo, best - 2 * width);
    hi = std::min(hi, best + 2 * width);
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("boundary case in one dimension") {
  const TrustRegionProblem prob = make_1d(2.0, 1.0, 1.0);
  // Independent grid oracle confirms the frozen minimizer.
  CHECK(grid_minimize_1d(2.0, 1.0, -1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-6));

  const TrustRegionResult res = solve_tr(prob);
  CHECK(res.point(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(res.lambda == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(res.interior);
  CHECK(res.solves >= 2);
}

TEST_CASE("interior case in one dimension") {
  const TrustRegionProblem prob = make_1d(0.5, 1.0, 1.0);
  const TrustRegionResult res = solve_tr(prob);
  CHECK(res.point(0) == doctest::Approx(0.5));
  CHECK(res.lambda == 0.0);
  CHECK(res.interior);
}

TEST_CASE("two dimensional boundary case") {
  TrustRegionProblem prob;
  prob.center = Eigen::VectorXd::Zero(2);
  prob.radius = 1.0;
  prob.linear = Eigen::VectorXd::Zero(2);
  prob.linear(0) = 3.0;
  Eigen::MatrixXd h(2, 2);
  h << 1, 0, 0, 2;
  prob.quadratic = h;
  prob.seminorm = std::make_shared<SeminormOperator>(Eigen::MatrixXd::Identity(2, 2));
  prob.accuracy = 1e-9;
  prob.mu = 1.0;
  prob.smoothness = 2.0;

  // Projected-gradient oracle confirms the frozen values.
  const Eigen::VectorXd ref =
      tr_reference_minimizer(prob.center, prob.radius, prob.linear, prob.quadratic, *prob.seminorm);
  CHECK(ref(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(ref(1)) <= 1e-6);

  const TrustRegionResult res = solve_tr(prob);
  CHECK(res.point(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(res.point(1)) <= 1e-12);
  CHECK(res.lambda == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_FALSE(res.interior);
}

TEST_CASE("random instances match the reference to the stated accuracy") {
  Rng rng(2024);
  for (int t = 0; t < 40; ++t) {
    const int d = 1 + static_cast<int>(rng.below(3));
    const int rank = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    auto m = std::make_shared<SeminormOperator>(random_psd(d, rank, rng, 0.3, 2.5));
    TrustRegionProblem prob;
    prob.center = rng.normal_vector(d);
    prob.radius = rng.uniform(0.3, 2.0);
    prob.quadratic = random_shared_kernel_psd(*m, rng, 0.2, 2.0);
    prob.linear = m->project_image(rng.normal_vector(d)) * rng.uniform(0.2, 4.0) +
                  prob.quadratic * prob.center;
    prob.seminorm = m;
    prob.accuracy = 1e-6;
    // Valid certificates from the pencil spectrum.
    const PencilSolver pencil(prob.quadratic, *m);
    prob.mu = std::max(pencil.eigenvalues().minCoeff() * 0.99, 1e-8);
    prob.smoothness = pencil.eigenvalues().maxCoeff() * 1.01 + 1e-8;

    const TrustRegionResult res = solve_tr(prob);
    const Eigen::VectorXd ref = tr_reference_minimizer(prob.center, prob.radius, prob.linear,
                                                       prob.quadratic, *m);
    CHECK(m->seminorm(res.point - ref) <= prob.accuracy + 2e-7);

    // Returned point is feasible and does not increase the model.
    CHECK(m->seminorm(res.point - prob.center) <= prob.radius * (1.0 + 1e-9));
    CHECK(tr_model(prob.linear, prob.quadratic, res.point) <=
          tr_model(prob.linear, prob.quadratic, prob.center) + 1e-10);
  }
}

TEST_CASE("multiplier replay lands on the boundary") {
  Rng rng(77);
  for (int t = 0; t < 15; ++t) {
    const int d = 2;
    auto m = std::make_shared<SeminormOperator>(random_psd(d, d, rng, 0.5, 2.0));
    TrustRegionProblem prob;
    prob.center = rng.normal_vector(d);
    prob.radius = 0.5;
    prob.quadratic = random_shared_kernel_psd(*m, rng, 0.5, 2.0);
    prob.linear = m->project_image(rng.normal_vector(d)) * 10.0 + prob.quadratic * prob.center;
    prob.seminorm = m;
    prob.accuracy = 1e-8;
    const PencilSolver pencil(prob.quadratic, *m);
    prob.mu = pencil.eigenvalues().minCoeff() * 0.99;
    prob.smoothness = pencil.eigenvalues().maxCoeff() * 1.01;

    const TrustRegionResult res = solve_tr(prob, pencil);
    if (res.interior) {
      CHECK(res.lambda == 0.0);
      continue;
    }
    const Eigen::VectorXd ghat = prob.linear - prob.quadratic * prob.center;
    const Eigen::VectorXd replay = pencil.solve(res.lambda, ghat);
    CHECK(m->seminorm(replay) == doctest::Approx(prob.radius).epsilon(1e-4));

    // Lipschitz in lambda: a half-iota nudge moves the point by at most the
    // target accuracy.
    const double ghat_dual = m->dual_seminorm(ghat);
    const double iota = prob.accuracy * prob.mu * prob.mu / ghat_dual;
    const Eigen::VectorXd nudged = pencil.solve(res.lambda + 0.5 * iota, ghat);
    CHECK(m->seminorm(nudged - replay) <= prob.accuracy);
  }
}

TEST_CASE("input validation") {
  TrustRegionProblem prob = make_1d(1.0, 1.0, 1.0);
  prob.radius = -1.0;
  CHECK_THROWS_AS(solve_tr(prob), std::invalid_argument);
  prob = make_1d(1.0, 1.0, 1.0);
  prob.mu = 0.0;
  CHECK_THROWS_AS(solve_tr(prob), std::invalid_argument);
  // Linear term outside Im(M) is rejected.
  prob = make_1d(1.0, 1.0, 1.0);
  Eigen::MatrixXd sing = Eigen::MatrixXd::Zero(2, 2);
  sing(0, 0) = 1.0;
  prob.center = Eigen::VectorXd::Zero(2);
  prob.linear = Eigen::VectorXd::Ones(2);
  prob.quadratic = sing;
  prob.seminorm = std::make_shared<SeminormOperator>(sing);
  CHECK_THROWS_AS(solve_tr(prob), std::invalid_argument);
}
