#include "ball_accel/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ball_accel {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

SeminormOperator::SeminormOperator(Eigen::MatrixXd m, double rank_tol)
    : m_(std::move(m)), rank_tol_(rank_tol) {
  require(m_.rows() == m_.cols(), "seminorm matrix must be square");
  require(rank_tol_ > 0.0, "rank tolerance must be positive");
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  require(asym <= 1e-10 * scale, "seminorm matrix must be symmetric");
  m_ = 0.5 * (m_ + m_.transpose().eval());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_);
  require(es.info() == Eigen::Success, "eigendecomposition of seminorm failed");
  const Eigen::VectorXd evals = es.eigenvalues();
  const double max_eig = std::max(evals.maxCoeff(), 0.0);
  require(evals.minCoeff() >= -rank_tol_ * std::max(max_eig, 1.0),
          "seminorm matrix has a significantly negative eigenvalue");

  const double cutoff = rank_tol_ * max_eig;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    if (evals(i) > cutoff) ++rank;

  image_basis_.resize(m_.rows(), rank);
  image_eigs_.resize(rank);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals(i) > cutoff) {
      image_basis_.col(k) = es.eigenvectors().col(i);
      image_eigs_(k) = evals(i);
      ++k;
    }
  }
}

SeminormOperator SeminormOperator::from_factor(const Eigen::MatrixXd& a, double rank_tol) {
  Eigen::MatrixXd m = a.transpose() * a;
  SeminormOperator op(std::move(m), rank_tol);
  const double residual = (op.m_ - a.transpose() * a).norm();
  require(residual <= 1e-10 * std::max(op.m_.norm(), 1e-300) + 1e-300,
          "factor does not reproduce the seminorm matrix");
  op.factor_ = a;
  return op;
}

double SeminormOperator::seminorm(const Eigen::VectorXd& x) const {
  require(x.size() == dim(), "dimension mismatch in seminorm");
  const double q = x.dot(m_ * x);
  return std::sqrt(std::max(q, 0.0));
}

double SeminormOperator::dual_seminorm(const Eigen::VectorXd& g, double rel_tol) const {
  require(g.size() == dim(), "dimension mismatch in dual seminorm");
  const Eigen::VectorXd coeffs = image_basis_.transpose() * g;
  const double out = (g - image_basis_ * coeffs).norm();
  if (out > rel_tol * g.norm())
    throw std::invalid_argument("gradient not in image of seminorm");
  double q = 0.0;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    q += coeffs(i) * coeffs(i) / image_eigs_(i);
  return std::sqrt(q);
}

Eigen::VectorXd SeminormOperator::pinv_apply(const Eigen::VectorXd& g) const {
  require(g.size() == dim(), "dimension mismatch in pseudoinverse apply");
  const Eigen::VectorXd coeffs = image_basis_.transpose() * g;
  return image_basis_ * coeffs.cwiseQuotient(image_eigs_).matrix();
}

Eigen::VectorXd SeminormOperator::project_image(const Eigen::VectorXd& g) const {
  return image_basis_ * (image_basis_.transpose() * g);
}

bool SeminormOperator::in_image(const Eigen::VectorXd& g, double rel_tol) const {
  if (g.size() != dim()) return false;
  const Eigen::VectorXd proj = project_image(g);
  return (g - proj).norm() <= rel_tol * std::max(g.norm(), 1e-300);
}

Eigen::MatrixXd SeminormOperator::whitener() const {
  return image_basis_ * image_eigs_.cwiseSqrt().cwiseInverse().asDiagonal();
}

double seminorm(const SeminormOperator& m, const Eigen::VectorXd& x) { return m.seminorm(x); }

double dual_seminorm(const SeminormOperator& m, const Eigen::VectorXd& g) {
  return m.dual_seminorm(g);
}

void RegularizedSystem::validate() const {
  require(m != nullptr, "regularized system needs a seminorm");
  require(h.rows() == h.cols() && h.rows() == m->dim(), "dimension mismatch in system");
  require(lambda >= 0.0, "lambda must be nonnegative");
  const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-10 * std::max(1.0, h.cwiseAbs().maxCoeff()), "H must be symmetric");
  // Shared kernel: every near-null direction of M must be annihilated by H.
  const double h_scale = std::max(h.norm(), 1.0);
  const Eigen::MatrixXd& v = m->image_basis();
  for (Eigen::Index i = 0; i < m->dim(); ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(m->dim(), i);
    Eigen::VectorXd kernel_part = e - v * (v.transpose() * e);
    const double kn = kernel_part.norm();
    if (kn < 1e-12) continue;
    kernel_part /= kn;
    if ((h * kernel_part).norm() > 1e-8 * h_scale)
      throw std::invalid_argument("H and M do not share a kernel");
  }
}

Eigen::VectorXd solve_regularized(const RegularizedSystem& sys, const Eigen::VectorXd& rhs) {
  sys.validate();
  require(rhs.size() == sys.m->dim(), "dimension mismatch in solve_regularized");
  const Eigen::MatrixXd full = sys.h + sys.lambda * sys.m->matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (full + full.transpose()));
  require(es.info() == Eigen::Success, "eigendecomposition failed in solve_regularized");
  const Eigen::VectorXd evals = es.eigenvalues();
  const double cutoff = sys.m->rank_tolerance() * std::max(evals.maxCoeff(), 0.0);

  const Eigen::VectorXd coeffs = es.eigenvectors().transpose() * rhs;
  double outside = 0.0;
  Eigen::VectorXd solved = Eigen::VectorXd::Zero(rhs.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals(i) > cutoff) {
      solved += es.eigenvectors().col(i) * (coeffs(i) / evals(i));
    } else {
      outside += coeffs(i) * coeffs(i);
    }
  }
  if (std::sqrt(outside) > 1e-8 * std::max(rhs.norm(), 1e-300))
    throw std::invalid_argument("rhs not in image of regularized system");
  return solved;
}

PencilSolver::PencilSolver(const Eigen::MatrixXd& h, const SeminormOperator& m) {
  if (h.rows() != m.dim() || h.cols() != m.dim())
    throw std::invalid_argument("dimension mismatch in pencil solver");
  const Eigen::MatrixXd w = m.whitener();
  Eigen::MatrixXd ht = w.transpose() * h * w;
  ht = 0.5 * (ht + ht.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ht);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("pencil eigendecomposition failed");
  eigs_ = es.eigenvalues().cwiseMax(0.0);
  transform_ = w * es.eigenvectors();
}

Eigen::VectorXd PencilSolver::prepare(const Eigen::VectorXd& rhs) const {
  return transform_.transpose() * rhs;
}

double PencilSolver::m_norm(double lambda, const Eigen::VectorXd& coeffs) const {
  const double zero_tol = 1e-12 * coeffs.norm();
  double q = 0.0;
  for (Eigen::Index i = 0; i < eigs_.size(); ++i) {
    const double denom = eigs_(i) + lambda;
    if (denom > 0.0) {
      const double t = coeffs(i) / denom;
      q += t * t;
    } else if (std::abs(coeffs(i)) > zero_tol) {
      throw std::invalid_argument("rhs not solvable: zero pencil eigenvalue with nonzero component");
    }
  }
  return std::sqrt(q);
}

Eigen::VectorXd PencilSolver::solve_prepared(double lambda, const Eigen::VectorXd& coeffs) const {
  const double zero_tol = 1e-12 * coeffs.norm();
  Eigen::VectorXd scaled(coeffs.size());
  for (Eigen::Index i = 0; i < eigs_.size(); ++i) {
    const double denom = eigs_(i) + lambda;
    if (denom > 0.0) {
      scaled(i) = coeffs(i) / denom;
    } else {
      if (std::abs(coeffs(i)) > zero_tol)
        throw std::invalid_argument("rhs not solvable: zero pencil eigenvalue with nonzero component");
      scaled(i) = 0.0;
    }
  }
  return transform_ * scaled;
}

}  // namespace ball_accel
