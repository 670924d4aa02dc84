#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "ball_accel/linalg.hpp"
#include "ball_accel/objectives.hpp"
#include "ball_accel/rng.hpp"

namespace test_helpers {

using ball_accel::ComposedObjective;
using ball_accel::Rng;
using ball_accel::SeminormOperator;

// Random symmetric PSD matrix with the given rank and eigenvalues in
// [lo, hi]; the kernel is a random subspace.
inline Eigen::MatrixXd random_psd(int dim, int rank, Rng& rng, double lo = 0.1, double hi = 3.0) {
  const Eigen::MatrixXd gauss = rng.normal_matrix(dim, dim);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd evals = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < rank; ++i) evals(i) = rng.uniform(lo, hi);
  return q * evals.asDiagonal() * q.transpose();
}

// PSD H sharing the kernel of a PSD M: H = B' D B for B spanning Im(M).
inline Eigen::MatrixXd random_shared_kernel_psd(const SeminormOperator& m, Rng& rng,
                                                double lo = 0.1, double hi = 3.0) {
  const Eigen::MatrixXd v = m.image_basis();
  const int r = static_cast<int>(v.cols());
  Eigen::MatrixXd core = random_psd(r, r, rng, lo, hi);
  return v * core * v.transpose();
}

// Central finite-difference gradient.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    g(i) = (f(xp) - f(xm)) / (2.0 * step);
  }
  return g;
}

// Directional Hessian quadratic form u'Hu by differencing the gradient.
inline double fd_hessian_quadform(const ComposedObjective& obj, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& u, double step) {
  const Eigen::VectorXd gp = obj.gradient(x + step * u);
  const Eigen::VectorXd gm = obj.gradient(x - step * u);
  return u.dot(gp - gm) / (2.0 * step);
}

// Reference trust-region minimizer: projected gradient on the quadratic in
// whitened coordinates. Independent of the bisection path under test.
inline Eigen::VectorXd tr_reference_minimizer(const Eigen::VectorXd& center, double radius,
                                              const Eigen::VectorXd& g, const Eigen::MatrixXd& h,
                                              const SeminormOperator& m, int iters = 400000) {
  const Eigen::MatrixXd w = m.whitener();
  const Eigen::VectorXd ghat = w.transpose() * (g - h * center);
  Eigen::MatrixXd hw = w.transpose() * h * w;
  hw = 0.5 * (hw + hw.transpose().eval());
  const double lip = hw.norm() + 1e-12;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(w.cols());
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd grad = hw * u - ghat;
    Eigen::VectorXd cand = u - grad / lip;
    const double norm = cand.norm();
    if (norm > radius) cand *= radius / norm;
    const double moved = (cand - u).norm();
    u = cand;
    if (moved < 1e-15 * (1.0 + radius)) break;
  }
  return center + w * u;
}

// Value of the trust-region model Q(x) = -g'x + x'Hx/2.
inline double tr_model(const Eigen::VectorXd& g, const Eigen::MatrixXd& h,
                       const Eigen::VectorXd& x) {
  return -g.dot(x) + 0.5 * x.dot(h * x);
}

}  // namespace test_helpers
