#include "ball_accel/objectives.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ball_accel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double stable_sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow.
double log1p_exp(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

void check_finite(const Eigen::VectorXd& x, const char* what) {
  if (!x.allFinite()) throw std::invalid_argument(what);
}

}  // namespace

Eigen::MatrixXd HessianInner::dense() const {
  Eigen::MatrixXd h = diagonal.asDiagonal();
  if (rank_one) h -= (*rank_one) * rank_one->transpose();
  return h;
}

InnerLoss InnerLoss::logistic(Eigen::VectorXd labels) {
  for (Eigen::Index i = 0; i < labels.size(); ++i)
    if (labels(i) != 1.0 && labels(i) != -1.0)
      throw std::invalid_argument("logistic labels must be +/-1");
  InnerLoss loss;
  loss.kind_ = Kind::kLogistic;
  loss.labels_ = std::move(labels);
  return loss;
}

InnerLoss InnerLoss::log_sum_exp(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("log-sum-exp scale must be positive");
  InnerLoss loss;
  loss.kind_ = Kind::kLogSumExp;
  loss.t_ = t;
  return loss;
}

InnerLoss InnerLoss::power(double p) {
  if (!(p > 3.0) && p != 2.0)
    throw std::invalid_argument("power loss requires p > 3 (or exactly 2)");
  InnerLoss loss;
  loss.kind_ = Kind::kPower;
  loss.p_ = p;
  return loss;
}

double InnerLoss::value(const Eigen::VectorXd& z) const {
  switch (kind_) {
    case Kind::kLogistic: {
      if (z.size() != labels_.size())
        throw std::invalid_argument("dimension mismatch in logistic loss");
      double s = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) s += log1p_exp(-labels_(i) * z(i));
      return s;
    }
    case Kind::kLogSumExp: {
      const double m = z.maxCoeff();
      double s = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) s += std::exp((z(i) - m) / t_);
      return m + t_ * std::log(s);
    }
    case Kind::kPower: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) s += std::pow(std::abs(z(i)), p_);
      return s;
    }
  }
  return 0.0;
}

Eigen::VectorXd InnerLoss::grad(const Eigen::VectorXd& z) const {
  Eigen::VectorXd g(z.size());
  switch (kind_) {
    case Kind::kLogistic:
      if (z.size() != labels_.size())
        throw std::invalid_argument("dimension mismatch in logistic loss");
      for (Eigen::Index i = 0; i < z.size(); ++i)
        g(i) = -labels_(i) * stable_sigmoid(-labels_(i) * z(i));
      return g;
    case Kind::kLogSumExp: {
      const double m = z.maxCoeff();
      double s = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        g(i) = std::exp((z(i) - m) / t_);
        s += g(i);
      }
      return g / s;
    }
    case Kind::kPower:
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double a = std::abs(z(i));
        g(i) = z(i) == 0.0 ? 0.0 : p_ * std::pow(a, p_ - 1.0) * (z(i) > 0.0 ? 1.0 : -1.0);
      }
      return g;
  }
  return g;
}

HessianInner InnerLoss::hessian(const Eigen::VectorXd& z) const {
  HessianInner h;
  h.diagonal.resize(z.size());
  switch (kind_) {
    case Kind::kLogistic:
      if (z.size() != labels_.size())
        throw std::invalid_argument("dimension mismatch in logistic loss");
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double s = stable_sigmoid(labels_(i) * z(i));
        h.diagonal(i) = s * (1.0 - s);
      }
      return h;
    case Kind::kLogSumExp: {
      const double m = z.maxCoeff();
      Eigen::VectorXd soft(z.size());
      double s = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        soft(i) = std::exp((z(i) - m) / t_);
        s += soft(i);
      }
      soft /= s;
      h.diagonal = soft / t_;
      h.rank_one = soft / std::sqrt(t_);
      return h;
    }
    case Kind::kPower:
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        // |z|^{p-2} extended by 0 at z = 0 (continuous for p > 3).
        const double a = std::abs(z(i));
        h.diagonal(i) = (a == 0.0 && p_ != 2.0) ? 0.0 : p_ * (p_ - 1.0) * std::pow(a, p_ - 2.0);
      }
      return h;
  }
  return h;
}

double InnerLoss::smoothness(Eigen::Index n) const {
  switch (kind_) {
    case Kind::kLogistic:
      return 1.0;
    case Kind::kLogSumExp:
      return static_cast<double>(n) / t_;
    case Kind::kPower:
      return p_ == 2.0 ? 2.0 : kInf;
  }
  return kInf;
}

double InnerLoss::qsc_constant(double reg_weight) const {
  switch (kind_) {
    case Kind::kLogistic:
      return 1.0;
    case Kind::kLogSumExp:
      return 2.0 / t_;
    case Kind::kPower: {
      if (p_ == 2.0) return 0.0;
      if (!(reg_weight > 0.0))
        throw std::invalid_argument("no finite QSC constant for unregularized power loss");
      // Exact supremum over t >= 0 of p(p-1)(p-2) t^{p-3} / (p(p-1) t^{p-2} + 2w),
      // attained at t* = ((p-3)*2w / (p(p-1)))^{1/(p-2)}.
      const double a = p_ * (p_ - 1.0) * (p_ - 2.0);
      const double b = p_ * (p_ - 1.0);
      const double c = 2.0 * reg_weight;
      const double t_star = std::pow((p_ - 3.0) * c / b, 1.0 / (p_ - 2.0));
      return a * std::pow(t_star, p_ - 3.0) / (b * std::pow(t_star, p_ - 2.0) + c);
    }
  }
  return 0.0;
}

double InnerLoss::strong_convexity() const {
  return (kind_ == Kind::kPower && p_ == 2.0) ? 2.0 : 0.0;
}

ComposedObjective::ComposedObjective(Eigen::MatrixXd a, Eigen::VectorXd b, InnerLoss inner)
    : a_(std::move(a)), b_(std::move(b)), inner_(std::move(inner)) {
  if (b_.size() != a_.rows()) throw std::invalid_argument("offset length must match rows of A");
  m_ = std::make_shared<SeminormOperator>(SeminormOperator::from_factor(a_));
}

ComposedObjective::ComposedObjective(Eigen::MatrixXd a, Eigen::VectorXd b, InnerLoss inner,
                                     std::shared_ptr<const SeminormOperator> m)
    : a_(std::move(a)), b_(std::move(b)), inner_(std::move(inner)), m_(std::move(m)) {
  if (b_.size() != a_.rows()) throw std::invalid_argument("offset length must match rows of A");
  if (m_ == nullptr || m_->dim() != a_.cols())
    throw std::invalid_argument("seminorm dimension must match columns of A");
  if ((m_->matrix() - a_.transpose() * a_).norm() > 1e-10 * std::max(m_->matrix().norm(), 1e-300))
    throw std::invalid_argument("seminorm must equal A'A");
}

ComposedObjective ComposedObjective::with_regularizer(double weight, Eigen::VectorXd center) const {
  if (!(weight >= 0.0)) throw std::invalid_argument("regularizer weight must be nonnegative");
  if (center.size() != dim()) throw std::invalid_argument("regularizer center dimension mismatch");
  ComposedObjective out = *this;
  out.reg_ = QuadRegularizer{weight, std::move(center)};
  return out;
}

double ComposedObjective::value(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw std::invalid_argument("dimension mismatch in objective value");
  check_finite(x, "non-finite input to objective value");
  double v = inner_.value(residual(x));
  if (reg_ && reg_->weight > 0.0) {
    const Eigen::VectorXd dx = x - reg_->center;
    v += reg_->weight * dx.dot(m_->apply(dx));
  }
  return v;
}

Eigen::VectorXd ComposedObjective::gradient(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw std::invalid_argument("dimension mismatch in objective gradient");
  check_finite(x, "non-finite input to objective gradient");
  Eigen::VectorXd g = a_.transpose() * inner_.grad(residual(x));
  if (reg_ && reg_->weight > 0.0) g += 2.0 * reg_->weight * m_->apply(x - reg_->center);
  return g;
}

HessianInner ComposedObjective::hessian_inner(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw std::invalid_argument("dimension mismatch in objective hessian");
  return inner_.hessian(residual(x));
}

Eigen::MatrixXd ComposedObjective::hessian(const Eigen::VectorXd& x) const {
  const HessianInner hi = hessian_inner(x);
  Eigen::MatrixXd h = a_.transpose() * hi.diagonal.asDiagonal() * a_;
  if (hi.rank_one) {
    const Eigen::VectorXd atu = a_.transpose() * (*hi.rank_one);
    h -= atu * atu.transpose();
  }
  if (reg_ && reg_->weight > 0.0) h += 2.0 * reg_->weight * m_->matrix();
  return 0.5 * (h + h.transpose().eval());
}

double ComposedObjective::qsc_constant() const {
  const double w = reg_ ? reg_->weight : 0.0;
  return inner_.qsc_constant(w);
}

double ComposedObjective::qsc_radius() const {
  const double m = qsc_constant();
  return m == 0.0 ? kInf : 1.0 / m;
}

double ComposedObjective::smoothness() const {
  double l = inner_.smoothness(rows());
  if (reg_ && reg_->weight > 0.0) l += 2.0 * reg_->weight;
  return l;
}

double ComposedObjective::strong_convexity() const {
  double mu = inner_.strong_convexity();
  if (reg_ && reg_->weight > 0.0) mu += 2.0 * reg_->weight;
  return mu;
}

}  // namespace ball_accel
