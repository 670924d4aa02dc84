#include "ball_accel/solvers.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ball_accel/ball_oracle.hpp"
#include "ball_accel/linalg.hpp"
#include "ball_accel/log.hpp"

namespace ball_accel {

MsResult ms_bacon(const ComposedObjective& f, const BaconConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.eps0 > 0.0 && cfg.radius_bound > 0.0))
    throw std::invalid_argument("ms_bacon needs positive eps, eps0, R");
  if (!(cfg.smoothness > 0.0) || !std::isfinite(cfg.smoothness))
    throw std::invalid_argument("ms_bacon needs a finite smoothness certificate");
  if (f.regularizer())
    throw std::invalid_argument("ms_bacon adds its own proximal regularizer; pass the raw objective");
  if (cfg.x0.size() != f.dim()) throw std::invalid_argument("ms_bacon x0 dimension mismatch");

  MsResult out;
  out.x = cfg.x0;
  out.trace.final_objective = f.value(cfg.x0);
  if (cfg.eps0 <= cfg.epsilon) {
    out.trace.status = "converged";
    return out;
  }

  const double big_r = cfg.radius_bound;
  const double weight = cfg.epsilon / (cfg.constants.regularizer_denominator * big_r * big_r);
  const ComposedObjective reg = f.with_regularizer(weight, cfg.x0);

  const double qsc = cfg.qsc > 0.0 ? cfg.qsc : reg.qsc_constant();
  double radius = cfg.ball_radius.value_or(qsc > 0.0 ? 1.0 / qsc : big_r);
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("ms_bacon could not determine a ball radius");

  const double mu = reg.strong_convexity();
  const double smooth = cfg.smoothness + 2.0 * weight;
  const double dist_bound = cfg.constants.diameter_factor * big_r;

  const NewtonBallOracle oracle(reg, radius, cfg.constants.stability_factor, mu, smooth,
                                dist_bound, cfg.constants);
  MsOptions options;
  options.constants = cfg.constants;
  options.f_target = cfg.f_target;

  // Solving the regularized objective to eps/2 is eps-accurate for f: the
  // regularizer stays below eps/2 over the iterate diameter.
  MsResult res = ms_accelerate(reg, oracle, cfg.x0, big_r, cfg.eps0, cfg.epsilon / 2.0, smooth,
                               options);
  res.trace.final_objective = f.value(res.x);
  return res;
}

SolveReport solve_logistic(const Eigen::MatrixXd& a, const Eigen::VectorXd& labels,
                           const Eigen::VectorXd& x0, double eps, double radius_bound,
                           const Constants& constants) {
  if (labels.size() != a.rows()) throw std::invalid_argument("label count must match rows of A");
  for (Eigen::Index i = 0; i < labels.size(); ++i)
    if (labels(i) != 1.0 && labels(i) != -1.0)
      throw std::invalid_argument("labels must be +/-1");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");

  const ComposedObjective obj(a, Eigen::VectorXd::Zero(a.rows()), InnerLoss::logistic(labels));

  BaconConfig cfg;
  cfg.epsilon = eps;
  cfg.x0 = x0;
  cfg.eps0 = obj.value(x0);  // f >= 0, so f(x0) bounds the gap
  cfg.radius_bound = radius_bound;
  cfg.qsc = 1.0;
  cfg.smoothness = 1.0;
  cfg.constants = constants;

  MsResult res = ms_bacon(obj, cfg);
  SolveReport report;
  report.x = res.x;
  report.objective = obj.value(res.x);
  report.status = res.trace.status;
  report.trace = std::move(res.trace);
  report.stats = res.stats;
  return report;
}

SolveReport solve_linf(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& x0, double eps, double radius_bound,
                       const Constants& constants) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (b.size() != a.rows()) throw std::invalid_argument("offset length must match rows of A");

  const Eigen::Index n = a.rows();
  Eigen::MatrixXd stacked(2 * n, a.cols());
  stacked.topRows(n) = a;
  stacked.bottomRows(n) = -a;
  Eigen::VectorXd offset(2 * n);
  offset.head(n) = b;
  offset.tail(n) = -b;

  // Softmax at scale t approximates the max within t*log(2n) = eps/2.
  const double t = eps / (2.0 * std::log(2.0 * static_cast<double>(n)));
  const ComposedObjective obj(stacked, offset, InnerLoss::log_sum_exp(t));

  BaconConfig cfg;
  cfg.epsilon = eps / 2.0;
  cfg.x0 = x0;
  cfg.eps0 = obj.value(x0);  // lse over the +/- stacking dominates the max, >= 0
  cfg.radius_bound = radius_bound;
  cfg.qsc = 2.0 / t;
  cfg.smoothness = static_cast<double>(2 * n) / t;
  cfg.constants = constants;

  MsResult res = ms_bacon(obj, cfg);
  SolveReport report;
  report.x = res.x;
  report.objective = (a * res.x - b).cwiseAbs().maxCoeff();
  report.status = res.trace.status;
  report.trace = std::move(res.trace);
  report.stats = res.stats;
  return report;
}

Eigen::VectorXd least_squares_init(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("shape mismatch in least squares");
  const SeminormOperator m = SeminormOperator::from_factor(a);
  return m.pinv_apply(a.transpose() * b);
}

SolveReport solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double p, double delta,
                     const Constants& constants) {
  if (!(p > 3.0)) throw std::invalid_argument("lp regression requires p > 3");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");

  const ComposedObjective obj(a, b, InnerLoss::power(p));
  const double n = static_cast<double>(a.rows());
  const double diam = 1.0 + 3.0 * std::sqrt(2.0);  // warm start to farthest iterate, in R_k units

  SolveReport report;
  Eigen::VectorXd x = least_squares_init(a, b);
  double eps_prev = obj.value(x);
  report.x = x;
  report.objective = eps_prev;
  report.status = "converged";

  const double floor = constants.lp_phase_floor * std::max(eps_prev, 1.0);
  if (eps_prev <= floor) return report;  // consistent system: already optimal

  const long long phase_count = static_cast<long long>(
      std::ceil(std::log2(std::max(n / std::pow(delta, 1.0 / p), 2.0))));

  for (long long k = 1; k <= phase_count; ++k) {
    const double eps_k = std::pow(2.0, -p) * eps_prev;
    const double radius =
        std::pow(std::pow(2.0, p + constants.lp_radius_shift) * std::pow(n, (p - 2.0) / 2.0) *
                     eps_prev,
                 1.0 / p);
    const double weight = eps_k / (constants.regularizer_denominator * radius * radius);
    const double qsc = obj.inner().qsc_constant(weight);
    // Local smoothness over the phase's iterate region.
    const double residual_sup = (a * x - b).cwiseAbs().maxCoeff() + diam * radius;
    const double smooth = p * (p - 1.0) * std::pow(residual_sup, p - 2.0);

    BaconConfig cfg;
    cfg.epsilon = eps_k;
    cfg.x0 = x;
    cfg.eps0 = eps_prev;
    cfg.radius_bound = radius;
    cfg.qsc = qsc;
    cfg.smoothness = smooth;
    cfg.constants = constants;

    MsResult res = ms_bacon(obj, cfg);
    x = res.x;

    SolveReport::Phase phase;
    phase.eps_k = eps_k;
    phase.radius = radius;
    phase.qsc = qsc;
    phase.smoothness = smooth;
    phase.final_objective = obj.value(x);
    phase.oracle_calls = res.stats.oracle_calls;
    phase.linear_solves = res.stats.linear_solves;
    phase.status = res.trace.status;
    report.phases.push_back(phase);
    report.stats += res.stats;
    report.trace = std::move(res.trace);

    eps_prev = eps_k;
    if (eps_k <= floor) {
      report.status = "additive_floor";
      log_info("lp regression stopped at the absolute accuracy floor (f* is at or near 0)");
      break;
    }
  }

  report.x = x;
  report.objective = obj.value(x);
  if (report.status != "additive_floor") report.status = "converged";
  return report;
}

double reference_minimize(const ComposedObjective& obj, const Eigen::VectorXd& x0,
                          double grad_tol, int max_iters, Eigen::VectorXd* argmin) {
  const SeminormOperator& m = obj.seminorm_op();
  Eigen::VectorXd x = x0;
  double fx = obj.value(x);
  double ridge = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd g = obj.gradient(x);
    if (m.dual_seminorm(g) <= grad_tol) break;
    const Eigen::MatrixXd h = obj.hessian(x);
    const PencilSolver pencil(h, m);
    const double lift = std::max(ridge, 1e-14 * std::max(pencil.eigenvalues().maxCoeff(), 1.0));
    Eigen::VectorXd step = pencil.solve(lift, g);
    double stepsize = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd cand = x - stepsize * step;
      const double fc = obj.value(cand);
      if (fc < fx) {
        x = cand;
        fx = fc;
        accepted = true;
        ridge = std::max(ridge * 0.25, 0.0);
        break;
      }
      stepsize *= 0.5;
    }
    if (!accepted) {
      if (ridge == 0.0)
        ridge = 1e-10 * std::max(pencil.eigenvalues().maxCoeff(), 1.0);
      else
        ridge *= 100.0;
      if (ridge > 1e12) break;
    }
  }
  if (argmin != nullptr) *argmin = x;
  return fx;
}

double estimate_radius(const ComposedObjective& obj, const Eigen::VectorXd& x0) {
  const SeminormOperator& m = obj.seminorm_op();
  const PencilSolver pencil(obj.hessian(x0), m);
  const double lift = 1e-12 * std::max(pencil.eigenvalues().maxCoeff(), 1.0);
  const Eigen::VectorXd step = pencil.solve(lift, obj.gradient(x0));
  log_warn("radius estimate from one Newton step is a heuristic, not a certified bound");
  return 16.0 * m.seminorm(step);
}

}  // namespace ball_accel
