#pragma once

#include <cstdint>
#include <vector>

#include "ball_accel/constants.hpp"

namespace ball_accel {

struct ScalingPoint {
  double ratio = 0.0;  // R / r
  long long oracle_calls = 0;
  long long linear_solves = 0;
  long long iterations = 0;
  double eps0 = 0.0;  // initial gap at this sweep point
  double eps = 0.0;   // gap target at this sweep point
  bool reached_target = false;
};

struct ScalingResult {
  std::vector<ScalingPoint> accelerated;
  std::vector<ScalingPoint> baseline;
  double accelerated_slope = 0.0;  // log-log fit of oracle calls vs R/r
  double baseline_slope = 0.0;
};

enum class SweepMode {
  kOracleRadius,     // fix R, sweep r so that R/r runs over `ratios`
  kInitialDistance,  // fix r = 1, sweep R over `ratios` at fixed absolute eps
};

struct ScalingConfig {
  std::vector<double> ratios;   // R/r values (or R values in distance mode)
  int rows = 40;
  int cols = 8;
  std::uint64_t seed = 7;
  double radius = 4.0;          // R in ratio mode
  double eps_rel = 1e-4;        // target gap as a fraction of the initial gap
  double eps_abs = 1e-3;        // target gap in distance mode
  bool run_baseline = true;
  SweepMode mode = SweepMode::kOracleRadius;
  Constants constants;
};

// Fixed synthetic logistic instance; counts ball-oracle calls for the
// accelerated loop and the plain iteration until the gap target is met
// (reference optimum from the damped-Newton solver).
ScalingResult bench_logistic_scaling(const ScalingConfig& config);

// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ball_accel
