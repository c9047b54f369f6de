#ifndef SGTW_FAMILIES_HPP
#define SGTW_FAMILIES_HPP

#include <optional>

#include "sgtw/phaseflow.hpp"
#include "sgtw/shooting.hpp"

namespace sgtw::families {

enum class Family {
  constant,
  soliton,
  antisoliton,
  array,
  antiarray,
  half_array,
  anti_half_array
};

const char* family_name(Family f);

// A classified travelling-wave solution in physical (x, t) coordinates.
// The stored profile is the monotone branch g(zeta); the travelling
// frame enters through zeta = cx*(x - x0) + ct*t and
// phi = sgn_g * g(zeta) + phi_offset.
struct WaveSolution {
  Family family = Family::constant;
  SystemParams params;  // v is the signed propagation velocity
  int helicity = +1;
  int winding = 0;
  bool unstable = false;
  bool unit_velocity_branch = false;  // |v| = 1 (gamma > 1) branch

  double phi_offset = 0.0;
  double sgn_g = 1.0;
  double cx = 0.0, ct = 0.0;     // frame map coefficients
  double zeta_per_xi = 1.0;      // d zeta / d xi along the wave coordinate
  double phase_x0 = 0.0;         // translation freedom

  std::optional<phaseflow::WaveProfile> profile;
  std::optional<double> Xi;   // profile period (arrays)
  std::optional<double> X;    // spatial period
  std::optional<double> z_M;  // array kinetic energy at the saddles
  std::optional<double> loop_I;
  double balance_residual = 0.0;
  double hat_mu = 0.0;  // mu_hat(gamma) when it was computed

  std::optional<double> phi_left_limit, phi_right_limit;  // xi -> -+inf

  // Half-array merge reference: the aligned array profile it approaches.
  std::optional<phaseflow::WaveProfile> merge_profile;
  double merge_rho = 0.0;

  double zeta_of(double x, double t) const;

  struct FieldPoint {
    double phi = 0.0, phi_x = 0.0, phi_t = 0.0;
  };
  FieldPoint eval(double x, double t) const;

  // The wave shape as a function of its own travelling coordinate xi.
  struct ProfilePoint {
    double g = 0.0, u = 0.0, phi = 0.0;
  };
  ProfilePoint at_xi(double xi) const;
};

// phi == -asin(gamma) (gamma < 1); with the unstable flag the other
// constant asin(gamma) + pi is produced instead (allowed up to gamma = 1).
WaveSolution build_constant(double gamma, bool include_unstable = false);

WaveSolution build_soliton(double gamma, double alpha, int helicity = +1,
                           const shooting::ShootOptions& opt = {});

enum class ArrayParam { z_M, mu, Xi, abs_v, loop_I };

WaveSolution build_array(double gamma, double alpha, int helicity,
                         ArrayParam which, double value,
                         const shooting::ShootOptions& opt = {});

// mu = infinity: the |v| = 1 branch, gamma > 1 only.
WaveSolution build_array_unit_velocity(double gamma, double alpha,
                                       int helicity, int samples = 2048);

WaveSolution build_half_array(double gamma, double alpha, int helicity,
                              double mu, const shooting::ShootOptions& opt = {});

// Unstable |v| = 1 kink for gamma < 1 (between adjacent rest angles) and
// the superluminal deformed soliton; both only behind the explicit flag.
WaveSolution build_unit_velocity_kink_unstable(double gamma, double alpha,
                                               int helicity,
                                               int samples = 2048);
WaveSolution build_soliton_superluminal_unstable(
    double gamma, double alpha, int helicity,
    const shooting::ShootOptions& opt = {});

double velocity_from_mu(double mu, double alpha);
double mu_from_velocity(double v, double alpha);

// The five interchangeable array parameters at fixed gamma.
struct ParamChart {
  double gamma = 0.0, alpha = 0.0;
  double mu = 0.0, z_M = 0.0, Xi = 0.0, abs_v = 0.0, loop_I = 0.0;
};

ParamChart array_param_chart(double gamma, double alpha, ArrayParam which,
                             double value,
                             const shooting::ShootOptions& opt = {});

// h = phi_t^2/2 + phi_x^2/2 + gamma phi - cos phi.
double energy_density(const WaveSolution& sol, double x, double t);

// Array solutions close up on a circle of length L = m X.
struct CircleWrap {
  int m = 0;
  double X = 0.0;
  double L = 0.0;
};

CircleWrap circle_wrap(const WaveSolution& sol, int m);
WaveSolution::FieldPoint eval_on_circle(const WaveSolution& sol,
                                        const CircleWrap& wrap, double x,
                                        double t);

}  // namespace sgtw::families

#endif
