#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace ball_accel {

// Hard instance f(x) = max_i { (U'x)_i - 4r i | i in [N] } under a random
// rotation U, served through an r-local oracle. Everything here works in
// the plain l2 norm.
struct NemirovskiInstance {
  int chain_length = 0;      // N
  double oracle_radius = 0;  // r
  double domain_radius = 0;  // R
  int dim = 0;               // d
  Eigen::MatrixXd rotation;  // U, d x d orthogonal
  std::uint64_t seed = 0;
  bool theorem_scale = false;  // whether dim meets the high-probability bound
};

// Haar-distributed orthogonal matrix, deterministic in the seed.
Eigen::MatrixXd random_orthogonal(int dim, std::uint64_t seed);

// dim defaults to min(theorem scale, 4N + 256); the instance records
// whether the full high-probability dimension condition holds.
NemirovskiInstance make_nemirovski_instance(int chain_length, double oracle_radius,
                                            double domain_radius, std::uint64_t seed,
                                            std::optional<int> dim_override = std::nullopt);

// max_{i in [N]} x_i - 4r*i, evaluated on unrotated coordinates.
double nemirovski_value(int chain_length, double oracle_radius, const Eigen::VectorXd& x);

// Index following the last entry with |x_j| > r; in [1, d+1].
int progress_index(const Eigen::VectorXd& x, double r);

// What an r-local query reveals: the function restricted to the first
// `revealed_columns` rotated coordinates (exact on the r-ball around the
// query), plus a subgradient of that restriction. Ties in the max break
// toward the lowest index.
struct LocalOracleResponse {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> subgradient;
  int revealed_columns = 0;
};

// Throws if the query leaves the domain ball of radius R.
LocalOracleResponse local_oracle_respond(const NemirovskiInstance& inst,
                                         const Eigen::VectorXd& query);

enum class QueryStrategy {
  kSubgradient,   // projected subgradient descent on the revealed model
  kGreedy,        // rotation-aware; advances progress by exactly one per query
  kRandomSearch,  // uniform directions at full radius
};

struct ProgressRecord {
  int query = 0;         // 1-based query index
  int progress = 0;      // running max of progress indices
  double suboptimality = 0.0;  // f(x_i) minus the known bound on inf
};

struct ProgressTrace {
  std::vector<ProgressRecord> records;
  int max_revealed = 0;
};

// Runs a query strategy against the r-local oracle. Progress guarantees
// from the rotation argument cover queries 1..N; larger budgets are allowed
// so convergence-time experiments can run past the hard horizon.
ProgressTrace run_progress_experiment(QueryStrategy strategy, const NemirovskiInstance& inst,
                                      int budget, std::uint64_t strategy_seed = 0);

}  // namespace ball_accel
