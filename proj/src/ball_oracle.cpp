#include "ball_accel/ball_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "ball_accel/log.hpp"
#include "ball_accel/trust_region.hpp"

namespace ball_accel {

void BallOracleSpec::validate() const {
  if (!(radius >= delta && delta > 0.0))
    throw std::invalid_argument("ball oracle requires r >= delta > 0");
  if (!(stability >= 1.0)) throw std::invalid_argument("stability factor must be >= 1");
  if (!(mu > 0.0)) throw std::invalid_argument("ball oracle requires mu > 0");
  if (!(smoothness >= mu)) throw std::invalid_argument("ball oracle requires L >= mu");
  if (!(dist_bound > 0.0)) throw std::invalid_argument("distance bound must be positive");
}

BallOracleOutput accel_newton_ball(const ComposedObjective& obj, const Eigen::VectorXd& center,
                                   const BallOracleSpec& spec, const Constants& constants) {
  spec.validate();
  if (center.size() != obj.dim())
    throw std::invalid_argument("dimension mismatch in ball oracle center");

  const SeminormOperator& m = obj.seminorm_op();
  const double r = spec.radius;
  const double c = spec.stability;
  const double alpha = 1.0 / c;
  const double tr_accuracy =
      spec.mu * spec.delta * spec.delta / (4.0 * spec.smoothness * c * (5.0 * r + spec.dist_bound));

  // Newton at the center: one Hessian, one pencil factorization, reused by
  // every inner trust-region solve.
  const Eigen::MatrixXd hessian = obj.hessian(center);
  const PencilSolver pencil(hessian, m);

  const double decay_target = constants.newton_log_factor * c * spec.smoothness *
                              (spec.dist_bound * r + c * r * r) /
                              (spec.mu * spec.delta * spec.delta);
  const long long iterations =
      std::max<long long>(1, static_cast<long long>(std::ceil(c * std::log(std::max(decay_target, 2.0)))));

  TrustRegionProblem sub;
  sub.center = center;
  sub.radius = r;
  sub.quadratic = hessian;
  sub.seminorm = obj.seminorm_ptr();
  sub.accuracy = tr_accuracy;
  sub.mu = spec.mu;
  sub.smoothness = spec.smoothness;

  BallOracleOutput out;
  Eigen::VectorXd x = center;
  Eigen::VectorXd z = center;
  for (long long k = 0; k < iterations; ++k) {
    const Eigen::VectorXd y = (x + alpha * z) / (1.0 + alpha);
    // Linear coefficient for min -g'w + w'Hw/2 matching the momentum step
    // argmin <grad f(y) - H(alpha y + (1-alpha) z), w> + w'Hw/2.
    sub.linear = hessian * (alpha * y + (1.0 - alpha) * z) - obj.gradient(y);
    const TrustRegionResult step = solve_tr(sub, pencil);
    out.linear_solves += step.solves;
    z = step.point;
    x = alpha * z + (1.0 - alpha) * x;
  }
  out.newton_iterations = iterations;

  // z stays feasible up to roundoff; clip a hairline overshoot. The
  // tolerance scales with the center too: the distance is computed from
  // O(||center||) vectors, so its absolute noise floor does not shrink
  // with r.
  const double dist = m.seminorm(z - center);
  const double overshoot_tol = 1e-9 * (r + m.seminorm(center) + 1.0);
  if (dist > r && dist <= r + overshoot_tol) {
    z = center + (z - center) * (r / dist);
  } else if (dist > r) {
    throw std::runtime_error("ball oracle produced an infeasible point");
  }
  out.point = z;
  return out;
}

Eigen::VectorXd brute_force_ball(const ComposedObjective& obj, const Eigen::VectorXd& center,
                                 double radius, double tol) {
  if (obj.dim() > 3) throw std::invalid_argument("reference oracle is desk-scale only");
  if (!(radius > 0.0) || !(tol > 0.0))
    throw std::invalid_argument("reference oracle needs positive radius and tolerance");

  // Work in whitened image coordinates: x = center + W u, where the ball is
  // the Euclidean unit-scaled ball ||u|| <= radius and gradients live in
  // Im(M), so nothing is lost by ignoring the kernel.
  const SeminormOperator& m = obj.seminorm_op();
  const Eigen::MatrixXd w = m.whitener();
  const Eigen::Index k = w.cols();

  Eigen::VectorXd u = Eigen::VectorXd::Zero(k);
  double fu = obj.value(center);
  double trial = radius;
  const int max_iters = 500000;
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd grad_u = w.transpose() * obj.gradient(center + w * u);
    double s = trial;
    Eigen::VectorXd cand;
    double fc = fu;
    bool descended = false;
    while (s > 1e-20) {
      cand = u - s * grad_u;
      const double norm = cand.norm();
      if (norm > radius) cand *= radius / norm;
      fc = obj.value(center + w * cand);
      if (fc < fu) {
        descended = true;
        break;
      }
      s *= 0.5;
    }
    if (!descended) break;  // decrease below fp resolution
    const double movement = (cand - u).norm();
    u = cand;
    fu = fc;
    trial = std::min(2.0 * s, 1e6 * radius);
    if (movement < tol) break;
  }
  return center + w * u;
}

NewtonBallOracle::NewtonBallOracle(const ComposedObjective& obj, double radius, double stability,
                                   double mu, double smoothness, double dist_bound,
                                   Constants constants)
    : obj_(obj),
      radius_(radius),
      stability_(stability),
      mu_(mu),
      smoothness_(smoothness),
      dist_bound_(dist_bound),
      constants_(constants) {
  if (!(dist_bound_ > 0.0)) {
    dist_bound_ = 10.0 * radius_;
    log_warn("ball oracle has no distance bound from the caller; defaulting to 10r");
  }
}

Eigen::VectorXd NewtonBallOracle::minimize(const Eigen::VectorXd& center, double delta,
                                           SolveStats& stats) const {
  BallOracleSpec spec;
  spec.delta = delta;
  spec.radius = radius_;
  spec.stability = stability_;
  spec.mu = mu_;
  spec.smoothness = smoothness_;
  spec.dist_bound = dist_bound_;
  const BallOracleOutput out = accel_newton_ball(obj_, center, spec, constants_);
  stats.linear_solves += out.linear_solves;
  stats.gradient_evals += out.newton_iterations;
  ++stats.oracle_calls;
  return out.point;
}

}  // namespace ball_accel
