#pragma once

#include <cmath>

namespace ball_accel {

// Every tunable constant hidden behind a Theta/O in the method derivations,
// in one place. Defaults are the values the acceptance suite is pinned to;
// the CLI can override them from a JSON file for experiments.
struct Constants {
  // Outer loop iteration caps: K_max = ceil(C * (R/r)^{2/3} * ln(eps0/eps))
  // for the accelerated loop and ceil(C * (R/r) * ln(eps0/eps)) for plain
  // ball iteration.
  double ms_iteration_constant = 8.0;
  double baseline_iteration_constant = 8.0;

  // Oracle-call budget per line search: ceil(C * log2(max(L D^2/eps, 4))) + 16.
  double linesearch_budget_constant = 4.0;

  // Proximal regularizer weight eps/(denom * R^2).
  double regularizer_denominator = 55.0;

  // Hessian stability factor used for QSC-certified oracles.
  double stability_factor = 2.718281828459045235;

  // Inner Newton iteration count K = ceil(c * ln(factor * c * L(Dr + cr^2) / (mu delta^2))).
  double newton_log_factor = 4.0;

  // Distance bound D = diameter_factor * R inside the accelerated loop.
  double diameter_factor = 4.242640687119285146;  // sqrt(18)

  // lp regression phase radius R_k^p = 2^{p + shift} * n^{(p-2)/2} * eps_{k-1}.
  double lp_radius_shift = 1.0;

  // Absolute floor for lp phase targets (scaled by eps_0); consistent
  // systems (f* = 0) stop here and report additive accuracy.
  double lp_phase_floor = 1e-13;
};

}  // namespace ball_accel
