#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace ball_accel {

struct LogisticData {
  Eigen::MatrixXd a;
  Eigen::VectorXd labels;
  Eigen::VectorXd planted;  // direction the labels were generated from
};

// Gaussian design, labels from a planted vector with a fraction flipped so
// the optimum stays finite.
LogisticData synthetic_logistic(int rows, int cols, std::uint64_t seed, double flip_fraction = 0.25);

struct RegressionData {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd planted;
};

RegressionData synthetic_regression(int rows, int cols, std::uint64_t seed, double noise = 0.1);

}  // namespace ball_accel
