#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>

namespace ball_accel {

// Cumulative work counters. "Linear solves" is the complexity accounting
// unit: one application of (H + lambda*M)^+ to a right-hand side.
struct SolveStats {
  long long linear_solves = 0;
  long long oracle_calls = 0;
  long long gradient_evals = 0;

  SolveStats& operator+=(const SolveStats& o) {
    linear_solves += o.linear_solves;
    oracle_calls += o.oracle_calls;
    gradient_evals += o.gradient_evals;
    return *this;
  }
};

// Symmetric PSD matrix M defining the seminorm ||x||_M = sqrt(x'Mx),
// with its eigendecomposition cached for pseudoinverse work. Immutable
// after construction.
class SeminormOperator {
 public:
  // Throws std::invalid_argument if m is not symmetric PSD up to
  // rank_tol (eigenvalues below -rank_tol*lambda_max reject; small
  // negatives clamp to zero).
  explicit SeminormOperator(Eigen::MatrixXd m, double rank_tol = 1e-10);

  // M = A'A. Keeps the factor; checks ||M - A'A||_F <= 1e-10 ||M||_F.
  static SeminormOperator from_factor(const Eigen::MatrixXd& a, double rank_tol = 1e-10);

  const Eigen::MatrixXd& matrix() const { return m_; }
  const std::optional<Eigen::MatrixXd>& factor() const { return factor_; }
  Eigen::Index dim() const { return m_.rows(); }
  Eigen::Index rank() const { return image_basis_.cols(); }
  double rank_tolerance() const { return rank_tol_; }

  double seminorm(const Eigen::VectorXd& x) const;

  // sqrt(g' M^+ g). Components of g outside Im(M) up to rel_tol*||g|| are
  // projected out; beyond that throws ("gradient not in image of seminorm").
  double dual_seminorm(const Eigen::VectorXd& g, double rel_tol = 1e-8) const;

  // M^+ g (implicitly projects onto the image).
  Eigen::VectorXd pinv_apply(const Eigen::VectorXd& g) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return m_ * x; }

  Eigen::VectorXd project_image(const Eigen::VectorXd& g) const;
  bool in_image(const Eigen::VectorXd& g, double rel_tol = 1e-8) const;

  // Orthonormal basis V of Im(M) (d x rank) and the matching eigenvalues.
  const Eigen::MatrixXd& image_basis() const { return image_basis_; }
  const Eigen::VectorXd& image_eigenvalues() const { return image_eigs_; }

  // W = V S^{-1/2}: whitening map with W'MW = I on the image.
  Eigen::MatrixXd whitener() const;

 private:
  Eigen::MatrixXd m_;
  std::optional<Eigen::MatrixXd> factor_;
  double rank_tol_;
  Eigen::MatrixXd image_basis_;
  Eigen::VectorXd image_eigs_;
};

double seminorm(const SeminormOperator& m, const Eigen::VectorXd& x);
double dual_seminorm(const SeminormOperator& m, const Eigen::VectorXd& g);

// H + lambda*M with symmetric PSD H sharing a kernel with M (the shared
// kernel is what keeps lambda = 0 solvable).
struct RegularizedSystem {
  Eigen::MatrixXd h;
  std::shared_ptr<const SeminormOperator> m;
  double lambda = 0.0;

  // Validates the invariants; throws on violation.
  void validate() const;
};

// Solves (H + lambda*M) x = rhs on the image, zero kernel component.
// rhs significantly outside the image throws.
Eigen::VectorXd solve_regularized(const RegularizedSystem& sys, const Eigen::VectorXd& rhs);

// Spectral factorization of the pencil (H, M) on Im(M), for repeated
// (H + lambda*M)^+ applications at varying lambda. Requires H PSD with
// ker(H) containing ker(M); with mu*M <= H every lambda >= 0 is solvable.
// Construction costs one eigendecomposition; afterwards each solve against
// a prepared right-hand side is O(rank) - it still counts as one linear
// system solve for complexity accounting.
class PencilSolver {
 public:
  PencilSolver(const Eigen::MatrixXd& h, const SeminormOperator& m);

  Eigen::Index rank() const { return eigs_.size(); }
  const Eigen::VectorXd& eigenvalues() const { return eigs_; }

  // Spectral coefficients of rhs; feeds the lambda-parameterized calls.
  Eigen::VectorXd prepare(const Eigen::VectorXd& rhs) const;

  // ||(H + lambda*M)^+ rhs||_M given prepared coefficients.
  double m_norm(double lambda, const Eigen::VectorXd& coeffs) const;

  // (H + lambda*M)^+ rhs given prepared coefficients.
  Eigen::VectorXd solve_prepared(double lambda, const Eigen::VectorXd& coeffs) const;

  Eigen::VectorXd solve(double lambda, const Eigen::VectorXd& rhs) const {
    return solve_prepared(lambda, prepare(rhs));
  }

 private:
  Eigen::MatrixXd transform_;  // W*P, maps spectral coords to x-space
  Eigen::VectorXd eigs_;       // generalized eigenvalues of (H, M) on the image
};

}  // namespace ball_accel
