#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>

#include "ball_accel/linalg.hpp"

namespace ball_accel {

// Hessian of an inner loss at a point: diagonal, possibly minus a rank-one
// term (log-sum-exp has hess = diag(s) - s s' after scaling).
struct HessianInner {
  Eigen::VectorXd diagonal;
  std::optional<Eigen::VectorXd> rank_one;  // hess = diag(diagonal) - u u'

  Eigen::MatrixXd dense() const;
};

// Separable-or-softmax loss g over residual space, with its certified
// smoothness / quasi-self-concordance constants in l2.
class InnerLoss {
 public:
  enum class Kind { kLogistic, kLogSumExp, kPower };

  static InnerLoss logistic(Eigen::VectorXd labels);
  static InnerLoss log_sum_exp(double t);
  static InnerLoss power(double p);

  Kind kind() const { return kind_; }
  double lse_scale() const { return t_; }
  double power_exponent() const { return p_; }
  const Eigen::VectorXd& labels() const { return labels_; }

  double value(const Eigen::VectorXd& z) const;
  Eigen::VectorXd grad(const Eigen::VectorXd& z) const;
  HessianInner hessian(const Eigen::VectorXd& z) const;

  // l2 smoothness certificate over z-space; n is the residual dimension
  // (log-sum-exp scales with it). Power losses with p > 3 have no global
  // certificate and return +inf.
  double smoothness(Eigen::Index n) const;

  // l2 QSC constant; reg_weight is the weight of an added
  // reg_weight*||z - z0||_2^2 term (required for power losses with p > 3,
  // where the constant is the exact 1-d supremum of |g'''|/g'').
  // Throws for an unregularized p > 3 power loss.
  double qsc_constant(double reg_weight) const;

  double strong_convexity() const;  // in z-space l2

 private:
  InnerLoss() = default;
  Kind kind_ = Kind::kLogistic;
  Eigen::VectorXd labels_;
  double t_ = 1.0;
  double p_ = 2.0;
};

struct QuadRegularizer {
  double weight = 0.0;
  Eigen::VectorXd center;
};

// f(x) = g(Ax - b) [+ weight*||x - center||_M^2], with M = A'A. Gradients
// stay in Im(M) by construction; certificates transfer from z-space l2 to
// the M-seminorm with no extra factor since ||h||_{A'A} = ||Ah||_2.
class ComposedObjective {
 public:
  ComposedObjective(Eigen::MatrixXd a, Eigen::VectorXd b, InnerLoss inner);
  ComposedObjective(Eigen::MatrixXd a, Eigen::VectorXd b, InnerLoss inner,
                    std::shared_ptr<const SeminormOperator> m);

  ComposedObjective with_regularizer(double weight, Eigen::VectorXd center) const;

  const Eigen::MatrixXd& design() const { return a_; }
  const Eigen::VectorXd& offset() const { return b_; }
  const InnerLoss& inner() const { return inner_; }
  const SeminormOperator& seminorm_op() const { return *m_; }
  std::shared_ptr<const SeminormOperator> seminorm_ptr() const { return m_; }
  const std::optional<QuadRegularizer>& regularizer() const { return reg_; }
  Eigen::Index dim() const { return a_.cols(); }
  Eigen::Index rows() const { return a_.rows(); }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const { return a_ * x - b_; }

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  HessianInner hessian_inner(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;  // x-space, d x d

  // Radius r = 1/M_qsc at which the objective is (r, e)-Hessian stable in
  // ||.||_M. Infinite for exactly quadratic losses. Throws for p > 3 power
  // losses without a regularizer.
  double qsc_radius() const;
  double qsc_constant() const;

  double smoothness() const;         // in ||.||_M (z-space certificate + reg)
  double strong_convexity() const;   // in ||.||_M

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  InnerLoss inner_;
  std::shared_ptr<const SeminormOperator> m_;
  std::optional<QuadRegularizer> reg_;
};

}  // namespace ball_accel
