#ifndef SGTW_VERIFY_HPP
#define SGTW_VERIFY_HPP

#include <vector>

#include "sgtw/families.hpp"

namespace sgtw::verify {

struct GridSpec {
  double x_lo = -5.0, x_hi = 5.0;
  double t_lo = 0.0, t_hi = 1.0;
  double h_x = 1e-3, h_t = 5e-4;  // finite-difference steps
  int n_x = 41, n_t = 5;          // sample points across the ranges
};

struct ResidualReport {
  GridSpec grid;
  double max_residual = 0.0;               // at the finest level
  std::vector<double> residuals_by_level;  // coarse -> fine (h halved)
  double observed_order = 0.0;             // from the last halving
};

// Centered second differences of the reconstructed phi(x, t) substituted
// into phi_tt - phi_xx + sin phi + alpha phi_t + gamma.
ResidualReport pde_residual(const families::WaveSolution& sol,
                            const GridSpec& spec, int levels = 3);

struct AsymptoticReport {
  bool pass = false;
  double left_limit_measured = 0.0, left_limit_expected = 0.0;
  double right_limit_measured = 0.0, right_limit_expected = 0.0;
  double left_rate = 0.0, right_rate = 0.0;  // fitted exponential rates
  double merge_rate = 0.0;    // half-array: rate of g_bar - g_check -> 0+
  double merge_sign_ok = 0.0; // 1 when the approach is one-sided
};

AsymptoticReport asymptotic_check(const families::WaveSolution& sol);

struct BoundsRow {
  double gamma = 0.0, hat_mu = 0.0, lower = 0.0, upper = 0.0, mu1 = 0.0;
  bool sandwich_ok = false;
};

struct BoundsSweep {
  std::vector<BoundsRow> rows;
  bool all_sandwich = false;
  bool strictly_increasing = false;
};

BoundsSweep bounds_sweep(const std::vector<double>& gammas,
                         const shooting::ShootOptions& opt = {});

struct ProbeOptions {
  double amplitude = 0.0;
  double horizon = 50.0;
  double dx = 0.05;
  double dt_factor = 0.5;  // dt = dt_factor * dx; must be <= 1 (CFL)
  double window_pad = 20.0;  // line domains: margin beyond the core
  unsigned seed = 0;
  int circle_m = 1;  // arrays: wrap on a circle of length m * X
};

struct StabilityProbeReport {
  double amplitude = 0.0, horizon = 0.0;
  double dx = 0.0, dt = 0.0;
  double drift_linf = 0.0;         // distance to the translated reference
  double drift_raw = 0.0;          // distance to the exact solution
  double velocity_estimate = 0.0;  // from level-crossing tracking
  double reference_velocity = 0.0;
  double energy_balance_defect = 0.0;  // circle runs only
};

// Method-of-lines evolution of the wave equation from the (perturbed)
// reconstructed profile.  Heuristic: reports drift, no pass/fail.
StabilityProbeReport stability_probe(const families::WaveSolution& sol,
                                     const ProbeOptions& opt);

}  // namespace sgtw::verify

#endif
