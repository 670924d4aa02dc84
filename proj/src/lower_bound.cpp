#include "ball_accel/lower_bound.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ball_accel/rng.hpp"

namespace ball_accel {

Eigen::MatrixXd random_orthogonal(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("dimension must be at least 1");
  Rng rng(seed);
  const Eigen::MatrixXd gauss = rng.normal_matrix(dim, dim);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the sign ambiguity so the distribution is Haar.
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

NemirovskiInstance make_nemirovski_instance(int chain_length, double oracle_radius,
                                            double domain_radius, std::uint64_t seed,
                                            std::optional<int> dim_override) {
  if (chain_length < 1) throw std::invalid_argument("chain length must be at least 1");
  if (!(oracle_radius > 0.0) || !(domain_radius > 0.0))
    throw std::invalid_argument("radii must be positive");

  const double ratio = domain_radius / oracle_radius;
  const double theorem_dim_d =
      std::ceil(60.0 * ratio * ratio * std::log(std::max(ratio / 0.05, 2.0)));
  const int theorem_dim = theorem_dim_d > 1e7 ? static_cast<int>(1e7)
                                              : static_cast<int>(theorem_dim_d);
  int dim = dim_override.value_or(std::min(theorem_dim, 4 * chain_length + 256));
  dim = std::max(dim, chain_length);

  NemirovskiInstance inst;
  inst.chain_length = chain_length;
  inst.oracle_radius = oracle_radius;
  inst.domain_radius = domain_radius;
  inst.dim = dim;
  inst.seed = seed;
  inst.theorem_scale = dim >= theorem_dim;
  inst.rotation = random_orthogonal(dim, seed);
  return inst;
}

double nemirovski_value(int chain_length, double oracle_radius, const Eigen::VectorXd& x) {
  if (x.size() < chain_length) throw std::invalid_argument("vector shorter than the chain");
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < chain_length; ++i) {
    const double v = x(i) - 4.0 * oracle_radius * (i + 1);
    if (v > best) best = v;
  }
  return best;
}

int progress_index(const Eigen::VectorXd& x, double r) {
  int last_large = 0;  // 1-based position of the last entry exceeding r
  for (Eigen::Index j = 0; j < x.size(); ++j)
    if (std::abs(x(j)) > r) last_large = static_cast<int>(j) + 1;
  return last_large + 1;
}

LocalOracleResponse local_oracle_respond(const NemirovskiInstance& inst,
                                         const Eigen::VectorXd& query) {
  if (query.size() != inst.dim) throw std::invalid_argument("query dimension mismatch");
  if (query.norm() > inst.domain_radius * (1.0 + 1e-12))
    throw std::invalid_argument("query outside the domain ball");

  const Eigen::VectorXd rotated = inst.rotation.transpose() * query;
  const int revealed = std::min(progress_index(rotated, inst.oracle_radius), inst.dim);
  const int active = std::min(revealed, inst.chain_length);
  // The response depends on the first `revealed` rotated coordinates only;
  // copying them keeps the closure self-contained.
  const Eigen::MatrixXd cols = inst.rotation.leftCols(active);
  const double four_r = 4.0 * inst.oracle_radius;

  const int chain = inst.chain_length;
  LocalOracleResponse resp;
  resp.revealed_columns = revealed;
  resp.value = [cols, four_r, active, chain](const Eigen::VectorXd& x) {
    const Eigen::VectorXd proj = cols.transpose() * x;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < active; ++i) best = std::max(best, proj(i) - four_r * (i + 1));
    // Coordinates beyond the revealed prefix enter as zeros.
    if (active < chain) best = std::max(best, -four_r * (active + 1));
    return best;
  };
  resp.subgradient = [cols, four_r, active, chain](const Eigen::VectorXd& x) {
    const Eigen::VectorXd proj = cols.transpose() * x;
    int arg = 0;
    double best = proj(0) - four_r;
    for (int i = 1; i < active; ++i) {
      const double v = proj(i) - four_r * (i + 1);
      if (v > best) {  // strict: ties break toward the lowest index
        best = v;
        arg = i;
      }
    }
    if (active < chain && -four_r * (active + 1) > best)
      return Eigen::VectorXd(Eigen::VectorXd::Zero(x.size()));
    return Eigen::VectorXd(cols.col(arg));
  };
  return resp;
}

ProgressTrace run_progress_experiment(QueryStrategy strategy, const NemirovskiInstance& inst,
                                      int budget, std::uint64_t strategy_seed) {
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  Rng rng(strategy_seed ^ 0x9e3779b97f4a7c15ULL);

  const double big_r = inst.domain_radius;
  const int n = inst.chain_length;
  // inf over the domain ball is at most the value at -(R/sqrt(N)) * 1_N.
  const double inf_bound = -big_r / std::sqrt(static_cast<double>(n)) - 4.0 * inst.oracle_radius;

  ProgressTrace trace;
  int progress_max = 0;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(inst.dim);
  for (int i = 1; i <= budget; ++i) {
    const LocalOracleResponse resp = local_oracle_respond(inst, x);
    const Eigen::VectorXd rotated = inst.rotation.transpose() * x;
    progress_max = std::max(progress_max, progress_index(rotated, inst.oracle_radius));
    trace.max_revealed = std::max(trace.max_revealed, resp.revealed_columns);

    ProgressRecord rec;
    rec.query = i;
    rec.progress = progress_max;
    rec.suboptimality = nemirovski_value(n, inst.oracle_radius, rotated) - inf_bound;
    trace.records.push_back(rec);

    // Next query.
    switch (strategy) {
      case QueryStrategy::kSubgradient: {
        const Eigen::VectorXd g = resp.subgradient(x);
        const double step = big_r / std::sqrt(static_cast<double>(i));
        x -= step * g;
        break;
      }
      case QueryStrategy::kGreedy: {
        // Rotation-aware adversary: query R*u_{p_i}, advancing the progress
        // index by exactly one per query.
        const int col = std::min(progress_max, inst.dim) - 1;
        x = big_r * inst.rotation.col(col);
        break;
      }
      case QueryStrategy::kRandomSearch: {
        Eigen::VectorXd dir = rng.normal_vector(inst.dim);
        dir.normalize();
        x = big_r * dir;
        break;
      }
    }
    const double norm = x.norm();
    if (norm > big_r) x *= big_r / norm;
  }
  return trace;
}

}  // namespace ball_accel
