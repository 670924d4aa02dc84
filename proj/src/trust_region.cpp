#include "ball_accel/trust_region.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ball_accel/log.hpp"

namespace ball_accel {

void TrustRegionProblem::validate() const {
  if (seminorm == nullptr) throw std::invalid_argument("trust region needs a seminorm");
  const Eigen::Index d = seminorm->dim();
  if (center.size() != d || linear.size() != d || quadratic.rows() != d || quadratic.cols() != d)
    throw std::invalid_argument("dimension mismatch in trust region problem");
  if (!(radius > 0.0)) throw std::invalid_argument("trust region radius must be positive");
  if (!(accuracy > 0.0)) throw std::invalid_argument("trust region accuracy must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("trust region needs mu > 0 with mu*M <= H");
  if (!(smoothness >= mu)) throw std::invalid_argument("smoothness certificate below mu");
  if (radius <= accuracy)
    log_warn("trust region accuracy is no smaller than its radius");
}

TrustRegionResult solve_tr(const TrustRegionProblem& prob) {
  prob.validate();
  const PencilSolver pencil(prob.quadratic, *prob.seminorm);
  return solve_tr(prob, pencil);
}

TrustRegionResult solve_tr(const TrustRegionProblem& prob, const PencilSolver& pencil) {
  const SeminormOperator& m = *prob.seminorm;
  const double r = prob.radius;

  // Change of variables y = x - center: minimize -ghat'y + y'Hy/2 over ||y||_M <= r.
  const Eigen::VectorXd ghat = prob.linear - prob.quadratic * prob.center;
  TrustRegionResult res;
  res.solves = 0;

  if (ghat.norm() == 0.0) {
    res.point = prob.center;
    res.lambda = 0.0;
    res.interior = true;
    return res;
  }

  const double ghat_dual = m.dual_seminorm(ghat);  // throws if outside Im(M)
  const Eigen::VectorXd coeffs = pencil.prepare(ghat);

  const double boundary = r * (1.0 + 1e-12);
  ++res.solves;
  if (pencil.m_norm(0.0, coeffs) <= boundary) {
    res.point = prob.center + pencil.solve_prepared(0.0, coeffs);
    res.lambda = 0.0;
    res.interior = true;
    return res;
  }

  double lo = 0.0;
  double hi = ghat_dual / r;  // ||(H + hi*M)^+ ghat||_M <= r by monotonicity
  const double iota = prob.accuracy * prob.mu * prob.mu / ghat_dual;
  const long long max_iters =
      static_cast<long long>(std::ceil(std::log2(std::max(hi / iota, 2.0)))) + 5;

  double accepted = hi;
  bool accepted_was_probed = false;
  long long iters = 0;
  while (true) {
    // Floating-point floor: iota can sit below the representable spacing of
    // lambda, in which case the certified-inside endpoint is as good as the
    // bisection can deliver.
    if (hi - lo <= std::max(iota, 64.0 * std::numeric_limits<double>::epsilon() * (hi + 1.0))) {
      accepted = hi;
      accepted_was_probed = false;
      if (hi - lo > iota) log_debug("trust region bisection stopped at fp resolution");
      break;
    }
    if (++iters > max_iters) {
      std::ostringstream msg;
      msg << "trust region bisection exceeded its iteration bound (" << max_iters
          << "); radius=" << r << " accuracy=" << prob.accuracy << " mu=" << prob.mu;
      throw std::runtime_error(msg.str());
    }
    const double lambda = 0.5 * (lo + hi);
    ++res.solves;
    if (pencil.m_norm(lambda, coeffs) <= boundary) {
      const double lambda_minus = lambda - iota;
      bool outside_below = lambda_minus <= 0.0;
      if (!outside_below) {
        ++res.solves;
        outside_below = pencil.m_norm(lambda_minus, coeffs) > r;
      }
      if (outside_below) {
        // lambda* in (lambda - iota, lambda]: report the larger endpoint.
        accepted = lambda;
        accepted_was_probed = true;
        break;
      }
      hi = lambda;
    } else {
      lo = lambda;
    }
  }

  if (!accepted_was_probed) ++res.solves;
  res.point = prob.center + pencil.solve_prepared(accepted, coeffs);
  res.lambda = accepted;
  res.interior = false;
  return res;
}

}  // namespace ball_accel
