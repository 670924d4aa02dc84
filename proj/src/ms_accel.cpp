#include "ball_accel/ms_accel.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ball_accel/log.hpp"

namespace ball_accel {

double compute_a_lambda(double lambda, double a_total) {
  if (!(lambda >= 0.0) || !(a_total >= 0.0))
    throw std::invalid_argument("compute_a_lambda needs nonnegative inputs");
  return 0.5 * (lambda + std::sqrt(lambda * lambda + 4.0 * lambda * a_total));
}

namespace {

Eigen::VectorXd extrapolate(double a_total, double a, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& v) {
  const double t = a_total / (a_total + a);
  return t * x + (1.0 - t) * v;
}

}  // namespace

MsOracleResult ms_linesearch(const ComposedObjective& obj, const BallOracle& oracle,
                             double a_total, const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                             double dist_bound, double smoothness, double epsilon,
                             const Constants& constants, SolveStats& stats) {
  const SeminormOperator& m = obj.seminorm_op();
  const double r = oracle.radius();
  const double big_l = smoothness;
  const double big_d = dist_bound;
  if (!(epsilon > 0.0)) throw std::invalid_argument("line search target must be positive");
  if (epsilon >= 2.0 * big_l * big_d * big_d)
    throw std::invalid_argument("eps >= 2LD^2: every point is eps-optimal, skip the search");

  const double upper0 = 2.0 * (big_d + r) * r / epsilon;
  const double delta = r / (12.0 * (1.0 + big_l * upper0));

  const long long budget =
      static_cast<long long>(std::ceil(constants.linesearch_budget_constant *
                                       std::log2(std::max(big_l * big_d * big_d / epsilon, 4.0)))) +
      16;

  MsOracleResult res;

  auto probe = [&](double lambda) {
    res.lambda = lambda;
    res.a = compute_a_lambda(lambda, a_total);
    res.y = extrapolate(a_total, res.a, x, v);
    res.z = oracle.minimize(res.y, delta, stats);
    ++res.oracle_calls;
    return m.dual_seminorm(obj.gradient(res.z));
  };

  auto finalize = [&] {
    res.movement = m.seminorm(res.z - res.y);
    const Eigen::VectorXd prox_point = res.y - res.lambda * m.pinv_apply(obj.gradient(res.z));
    res.sigma_residual = m.seminorm(res.z - prox_point);
  };

  // First probe at the top of the range; a small gradient there certifies
  // global eps-optimality of the returned point.
  double upper = upper0;
  double lower = r / (2.0 * big_l * big_d);
  double grad_dual = probe(upper);
  if (upper * grad_dual <= r + upper * big_l * delta) {
    finalize();
    res.early_solution = res.z;
    return res;
  }

  long long calls = 1;
  bool lower_probed = false;
  while (std::abs(res.lambda * grad_dual - r) > r / 6.0) {
    if (calls >= budget) {
      std::ostringstream msg;
      msg << "MS line search exhausted its oracle budget (" << budget << "); lambda interval ["
          << lower << ", " << upper << "], last g=" << res.lambda * grad_dual << ", target r=" << r;
      throw std::runtime_error(msg.str());
    }
    // The lower end of the initial bracket is never probed; if the root sits
    // below it the interval collapses there, and we extend downward.
    if (upper - lower <= 64.0 * std::numeric_limits<double>::epsilon() * (upper + 1.0)) {
      if (!lower_probed) {
        lower *= 0.5;
        log_debug("MS line search extended its bracket below the nominal lower end");
        continue;
      }
      std::ostringstream msg;
      msg << "MS line search bracket collapsed without meeting its tolerance; lambda=" << res.lambda
          << " g=" << res.lambda * grad_dual << " r=" << r;
      throw std::runtime_error(msg.str());
    }
    const double lambda = 0.5 * (lower + upper);
    grad_dual = probe(lambda);
    ++calls;
    if (lambda * grad_dual >= r) {
      upper = lambda;
    } else {
      lower = lambda;
      lower_probed = true;
    }
  }

  finalize();
  return res;
}

namespace {

void record_row(SolverTrace& trace, long long k, double f_before, const MsOracleResult& step,
                double a_after, const SolveStats& before, const SolveStats& after) {
  TraceRow row;
  row.k = k;
  row.objective = f_before;
  row.movement = step.movement;
  row.lambda = step.lambda;
  row.a_total = a_after;
  row.sigma_residual = step.sigma_residual;
  row.early = step.early_solution.has_value();
  row.oracle_calls = after.oracle_calls - before.oracle_calls;
  row.linear_solves = after.linear_solves - before.linear_solves;
  trace.rows.push_back(row);
}

}  // namespace

MsResult ms_accelerate(const ComposedObjective& obj, const BallOracle& oracle,
                       const Eigen::VectorXd& x0, double radius_bound, double eps0, double eps,
                       double smoothness, const MsOptions& options) {
  if (!(radius_bound > 0.0) || !(eps0 > 0.0) || !(eps > 0.0) || !(smoothness > 0.0))
    throw std::invalid_argument("ms_accelerate needs positive R, eps0, eps, L");

  MsResult out;
  out.x = x0;
  out.trace.final_objective = obj.value(x0);
  if (eps0 <= eps) {
    out.trace.status = "converged";
    return out;
  }

  const Constants& consts = options.constants;
  const double r = oracle.radius();
  const double dist_bound = consts.diameter_factor * radius_bound;
  if (eps >= 2.0 * smoothness * dist_bound * dist_bound) {
    // Smoothness alone makes any iterate eps-optimal here.
    out.trace.status = "trivial_by_smoothness";
    return out;
  }

  const long long k_max = std::max<long long>(
      1, static_cast<long long>(std::ceil(consts.ms_iteration_constant *
                                          std::pow(radius_bound / r, 2.0 / 3.0) *
                                          std::log(eps0 / eps))));

  double a_total = radius_bound * radius_bound / (2.0 * eps0);
  Eigen::VectorXd x = x0;
  Eigen::VectorXd v = x0;
  double best_f = obj.value(x0);
  Eigen::VectorXd best_x = x0;
  out.trace.status = "max_iterations";

  for (long long k = 0; k < k_max; ++k) {
    const double f_before = obj.value(x);
    const SolveStats before = out.stats;
    const MsOracleResult step = ms_linesearch(obj, oracle, a_total, x, v, dist_bound, smoothness,
                                              eps, consts, out.stats);

    if (step.early_solution) {
      record_row(out.trace, k, f_before, step, a_total, before, out.stats);
      const double fe = obj.value(*step.early_solution);
      if (fe < best_f) {
        best_f = fe;
        best_x = *step.early_solution;
      }
      out.trace.status = "early_solution";
      break;
    }

    x = step.z;
    v -= step.a * obj.seminorm_op().pinv_apply(obj.gradient(x));
    a_total += step.a;
    record_row(out.trace, k, f_before, step, a_total, before, out.stats);
    if (obj.regularizer()) {
      const QuadRegularizer& reg = *obj.regularizer();
      const double dist = obj.seminorm_op().seminorm(x - reg.center);
      out.trace.rows.back().reg_value = reg.weight * dist * dist;
    }

    const double fx = obj.value(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
    if (options.f_target && fx <= *options.f_target) {
      out.trace.status = "target_reached";
      break;
    }
  }

  out.x = best_x;
  out.trace.final_objective = best_f;
  return out;
}

MsResult iterate_ball_baseline(const ComposedObjective& obj, const BallOracle& oracle,
                               const Eigen::VectorXd& x0, double eps0, double eps,
                               double radius_bound, const MsOptions& options) {
  if (!(radius_bound > 0.0) || !(eps0 > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("iterate_ball_baseline needs positive R, eps0, eps");

  const Constants& consts = options.constants;
  const double r = oracle.radius();
  const double dist_bound = consts.diameter_factor * radius_bound;
  const long long k_max = std::max<long long>(
      1, static_cast<long long>(std::ceil(consts.baseline_iteration_constant *
                                          (radius_bound / r) * std::log(eps0 / eps))));

  MsResult out;
  out.trace.status = "max_iterations";
  Eigen::VectorXd x = x0;
  double fx = obj.value(x);
  double best_f = fx;
  Eigen::VectorXd best_x = x;

  double stagnation_reference = fx;
  int stagnant_steps = 0;

  // Oracle accuracy matching the accelerated loop's contract.
  const double smooth = obj.smoothness();
  const double delta =
      std::isfinite(smooth) ? r / (12.0 + 126.0 * smooth * radius_bound * r / eps) : r * 1e-6;

  for (long long k = 0; k < k_max; ++k) {
    const SolveStats before = out.stats;
    const Eigen::VectorXd next = oracle.minimize(x, delta, out.stats);

    TraceRow row;
    row.k = k;
    row.objective = fx;
    row.movement = obj.seminorm_op().seminorm(next - x);
    row.a_total = 0.0;
    row.lambda = 0.0;
    row.oracle_calls = out.stats.oracle_calls - before.oracle_calls;
    row.linear_solves = out.stats.linear_solves - before.linear_solves;
    out.trace.rows.push_back(row);

    x = next;
    fx = obj.value(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
    if (options.f_target && fx <= *options.f_target) {
      out.trace.status = "target_reached";
      break;
    }

    // Gradient-based certificate: f(x) - f* <= ||grad f(x)||_{M+} (D + r).
    const double grad_dual = obj.seminorm_op().dual_seminorm(obj.gradient(x));
    if (grad_dual * (dist_bound + r) <= eps) {
      out.trace.status = "converged";
      break;
    }
    if (stagnation_reference - fx <= 1e-15 * (std::abs(fx) + 1.0)) {
      if (++stagnant_steps >= 3) {
        out.trace.status = "converged";
        break;
      }
    } else {
      stagnant_steps = 0;
      stagnation_reference = fx;
    }
  }

  out.x = best_x;
  out.trace.final_objective = best_f;
  return out;
}

}  // namespace ball_accel
