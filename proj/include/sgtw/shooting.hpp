#ifndef SGTW_SHOOTING_HPP
#define SGTW_SHOOTING_HPP

#include <utility>
#include <vector>

#include "sgtw/phaseflow.hpp"

namespace sgtw::shooting {

struct ShootOptions {
  double mu_tol = 1e-12;  // relative bracket width at termination
  phaseflow::IntegrateOptions integ = {.rtol = 1e-12, .atol = 1e-12};
  int half_array_span = 8;  // periods
};

struct ShootResult {
  double mu_star = 0.0;
  std::vector<std::pair<double, double>> bracket_history;
  phaseflow::KineticCurve curve;
  double balance_residual = 0.0;     // |mu * I - 2 pi gamma|
  double loop_I = 0.0;
  double z_M = 0.0;                  // periodic problems
  double periodicity_residual = 0.0; // periodic problems
};

// Classical bounds for the tuned dissipation of the heteroclinic
// connection: sqrt(sqrt(3(1-g^2)+1) - 2 sqrt(1-g^2)) <= mu_hat <=
// sqrt(2 (1 - sqrt(1-g^2))).
double hat_mu_lower_bound(double gamma);
double hat_mu_upper_bound(double gamma);

// The unique dissipation mu_hat(gamma) at which the separatrix leaving
// one saddle reaches the next one (the soliton connection).  Valid for
// gamma in (0, 0.999].
ShootResult solve_hat_mu(double gamma, const ShootOptions& opt = {});

// The unique mu at which the orbit through z(g0) = z_M is 2*pi-periodic
// (the soliton-array branch).  Any gamma > 0, z_M > 0.
ShootResult solve_check_mu(double gamma, double z_M,
                           const ShootOptions& opt = {});

// Inverse problem: the periodic orbit at a prescribed mu; finds z_M by a
// safeguarded secant on log z_M.  Throws when mu is not below mu_hat
// (gamma <= 1) so no periodic orbit exists.
ShootResult periodic_curve_at_mu(double gamma, double mu,
                                 const ShootOptions& opt = {});

struct HalfArrayCurve {
  phaseflow::KineticCurve zbar;    // separatrix launch, z(g_k^M) = 0
  phaseflow::KineticCurve zcheck;  // periodic orbit at the same mu
  std::vector<double> g_samples;
  std::vector<double> w_samples;   // zbar - zcheck (negative, decaying)
  double w0 = 0.0;                 // w at the launch saddle = -z_M
  double decay_rate = 0.0;         // fitted from log|w| on the far 60%
  double decay_rate_bound = 0.0;   // mu / sqrt(2 (max zcheck + |w0|))
  double rho_offset = 0.0;         // 'time' shift aligning the profiles
  double g_ref = 0.0;              // where rho is anchored (launch + 2 pi)
  double mu = 0.0, hat_mu = 0.0, z_M = 0.0;
};

HalfArrayCurve half_array_curve(double gamma, double mu,
                                const ShootOptions& opt = {});

// gamma > 1, velocity +-1 branch: alpha g' = gamma - sin g solved by
// quadrature; g is linear-periodic with period Xi in xi = +-x - t.
struct UnitVelocityProfile {
  phaseflow::WaveProfile profile;
  double Xi = 0.0;
};

UnitVelocityProfile unit_velocity_profile(double gamma, double alpha,
                                          int samples = 2048);

// Small-z_M leading behaviour of the gamma > 1 array branch.
struct ArrayLeadingOrder {
  double mu = 0.0;          // (gamma-1)/sqrt(2 z_M)
  double I = 0.0;           // sqrt(2 z_M) * 2 pi gamma / (gamma-1)
  double Xi_scaling = 0.0;  // 1/sqrt(z_M) (scaling only)
  double v = 0.0;           // (gamma-1)/sqrt(2 z_M alpha^2 + (gamma-1)^2)
};

ArrayLeadingOrder array_leading_order(double gamma, double z_M, double alpha);

}  // namespace sgtw::shooting

#endif
