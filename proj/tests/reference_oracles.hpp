#pragma once

#include <Eigen/Dense>

#include "ball_accel/solvers.hpp"

namespace test_helpers {

// Grid-refinement reference for min ||Ax - b||_inf, d <= 2. Independent of
// the softmax path under test.
inline double linf_reference(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index d = a.cols();
  auto eval = [&](const Eigen::VectorXd& x) { return (a * x - b).cwiseAbs().maxCoeff(); };

  Eigen::VectorXd center = ball_accel::least_squares_init(a, b);
  double width = 4.0 * (1.0 + center.cwiseAbs().maxCoeff());
  double best = eval(center);
  for (int level = 0; level < 60; ++level) {
    const int steps = 24;
    Eigen::VectorXd arg = center;
    for (int i = -steps; i <= steps; ++i) {
      Eigen::VectorXd x(d);
      x(0) = center(0) + width * i / steps;
      if (d == 1) {
        const double v = eval(x);
        if (v < best) {
          best = v;
          arg = x;
        }
        continue;
      }
      for (int j = -steps; j <= steps; ++j) {
        x(1) = center(1) + width * j / steps;
        const double v = eval(x);
        if (v < best) {
          best = v;
          arg = x;
        }
      }
    }
    center = arg;
    width *= 3.0 / steps;  // keep a margin around the coarse argmin
  }
  return best;
}

}  // namespace test_helpers
