#include "ball_accel/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "ball_accel/rng.hpp"

namespace ball_accel {

LogisticData synthetic_logistic(int rows, int cols, std::uint64_t seed, double flip_fraction) {
  if (rows < 2 || cols < 1) throw std::invalid_argument("need at least 2 rows and 1 column");
  Rng rng(seed);
  LogisticData data;
  data.a = rng.normal_matrix(rows, cols) / std::sqrt(static_cast<double>(cols));
  data.planted = rng.normal_vector(cols);
  data.planted *= 2.0 / std::max(data.planted.norm(), 1e-12);

  const Eigen::VectorXd scores = data.a * data.planted;
  data.labels.resize(rows);
  for (int i = 0; i < rows; ++i) {
    double label = scores(i) >= 0.0 ? 1.0 : -1.0;
    if (rng.uniform() < flip_fraction) label = -label;
    data.labels(i) = label;
  }
  // Both classes present keeps the instance well-posed.
  if ((data.labels.array() > 0).count() == 0) data.labels(0) = 1.0;
  if ((data.labels.array() < 0).count() == 0) data.labels(0) = -1.0;
  return data;
}

RegressionData synthetic_regression(int rows, int cols, std::uint64_t seed, double noise) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("need at least 1 row and 1 column");
  Rng rng(seed);
  RegressionData data;
  data.a = rng.normal_matrix(rows, cols) / std::sqrt(static_cast<double>(cols));
  data.planted = rng.normal_vector(cols);
  data.b = data.a * data.planted + noise * rng.normal_vector(rows);
  return data;
}

}  // namespace ball_accel
