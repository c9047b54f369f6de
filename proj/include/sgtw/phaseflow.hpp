#ifndef SGTW_PHASEFLOW_HPP
#define SGTW_PHASEFLOW_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "sgtw/detail/dp5.hpp"
#include "sgtw/detail/interp.hpp"
#include "sgtw/params.hpp"

namespace sgtw::phaseflow {

enum class EndpointKind { saddle_touch, zero_crossing, truncated, unbounded };

// Local behaviour u(eta) = eta*(u1 + u2*eta + u3*eta^2) of a trajectory
// at a touched saddle, eta = g - g_saddle (signed).  Inside |eta| <= band
// this series replaces the integrator's dense output, which keeps the
// square-root vanishing exact through the singular point.
struct SaddleTail {
  double g_saddle = 0.0;
  double u1 = 0.0, u2 = 0.0, u3 = 0.0;
  double band = 0.0;
  double u(double eta) const { return eta * (u1 + eta * (u2 + eta * u3)); }
  double du(double eta) const { return u1 + eta * (2.0 * u2 + 3.0 * u3 * eta); }
};

struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double z_blowup = 1e6;      // stop once z exceeds this cap
  double launch_delta = 1e-6; // offset of a separatrix launch from the saddle
  double saddle_snap = 1e-6;  // zero-endpoint-to-saddle identification radius
  double saddle_touch_z = 1e-8;  // z at a span end counting as a touch
  double u_floor = 1e-9;      // |u| at which a vanishing endpoint is declared
  std::size_t max_steps = 8000000;
  bool require_separatrix_launch = false;
};

enum class Termination { span, zero, blowup };

// A solution z(g) of the kinetic-energy equation
//   z_g = gamma - sin g - eps*mu*sqrt(2 z)
// on an interval, with dense evaluation and endpoint metadata.  Immutable
// after construction.
class KineticCurve {
 public:
  KineticCurve() = default;  // empty; filled by the factory functions

  double z(double g) const;
  double u(double g) const;        // eps * sqrt(2 z), smooth through saddles
  double e(double g) const;        // z + U(g)
  double z_slope(double g) const;  // right-hand side of the z equation

  double g_left() const { return g_left_; }
  double g_right() const { return g_right_; }
  bool periodic() const { return periodic_; }
  bool contains(double g) const;

  EndpointKind endpoint_left() const { return end_left_; }
  EndpointKind endpoint_right() const { return end_right_; }
  Termination termination() const { return termination_; }
  double z_end() const { return z_end_; }  // z at the marching endpoint
  const std::optional<SaddleTail>& tail_left() const { return tail_left_; }
  const std::optional<SaddleTail>& tail_right() const { return tail_right_; }

  const SystemParams& params() const { return params_; }
  double g0() const { return g0_; }  // launch position
  double z0() const { return z0_; }  // launch kinetic energy

  const std::vector<double>& g_grid() const { return g_grid_; }
  const std::vector<double>& z_values() const { return z_values_; }
  std::vector<double> e_values() const;

  double periodicity_residual() const { return periodicity_residual_; }

  // Synthetic curve from samples (monotone-safe cubic in between).
  static KineticCurve from_samples(std::vector<double> g,
                                   std::vector<double> z, SystemParams params);

 private:
  friend KineticCurve integrate_z(double, double, const SystemParams&, int,
                                  double, const IntegrateOptions&);
  friend KineticCurve clamp_endpoint_to_saddle(const KineticCurve&, int,
                                               double);
  friend KineticCurve periodic_extension(const KineticCurve&, double);

  double reduce(double g) const;  // wraps into the base period if periodic
  double u_dense(double g) const;

  SystemParams params_;
  double g0_ = 0.0, z0_ = 0.0;
  double g_left_ = 0.0, g_right_ = 0.0;
  EndpointKind end_left_ = EndpointKind::truncated;
  EndpointKind end_right_ = EndpointKind::truncated;
  Termination termination_ = Termination::span;
  double z_end_ = 0.0;
  std::optional<SaddleTail> tail_left_, tail_right_;
  bool periodic_ = false;
  double periodicity_residual_ = 0.0;

  // dense representation: DP5 segments in g (ascending) or a pchip fit
  int dir_ = +1;  // g-direction the integration marched in
  std::vector<detail::Dp5Segment> segs_;  // parametrized by tau = dir*(g-g0)
  std::vector<double> seg_tau_;           // segment start taus (sorted)
  double tau_begin_ = 0.0, tau_end_ = 0.0;
  std::shared_ptr<const detail::Pchip> pchip_;  // synthetic curves

  std::vector<double> g_grid_, z_values_;
};

// Integrates the kinetic-energy equation from (g0, z0) in the given
// g-direction until z vanishes, the span is exhausted or z blows up.
// z0 == 0 at a saddle launches along the separatrix with the local slope
// series; z0 == 0 elsewhere rises from a regular zero (or throws when a
// separatrix launch was demanded).
KineticCurve integrate_z(double g0, double z0, const SystemParams& params,
                         int direction, double g_max_span,
                         const IntegrateOptions& opt = {});

// Declares the curve's endpoint on the given side (-1 left, +1 right) a
// saddle touch at g_saddle and attaches the local series tail there.
KineticCurve clamp_endpoint_to_saddle(const KineticCurve& curve, int side,
                                      double g_saddle);

// Marks a one-period curve as 2*pi-periodic (domain all of R).
KineticCurve periodic_extension(const KineticCurve& curve, double residual);

// Max over grid nodes of the defect of the Volterra reformulation
//   z(g) - z0 - U(g0) + U(g) + eps*mu*Int_{g0}^{g} sqrt(2 z) ds.
double volterra_residual(const KineticCurve& curve);

// I(z, g) = Int_g^{g+2pi} sqrt(2 z(s)) ds.
double loop_integral(const KineticCurve& curve, double g);

struct StepRelationResidual {
  int k = 0;
  double dz = 0.0;    // z(g_{k+1}) - z(g_k)
  double loop = 0.0;  // I_k
  double residual = 0.0;
};

// Residuals of z(g_{k+1}) - z(g_k) = 2*pi*gamma - eps*mu*I_k for every
// available period offset from g0.
std::vector<StepRelationResidual> step_relation_check(const KineticCurve& curve,
                                                      double g0);

struct QuadratureOptions {
  double reach_tol = 1e-9;  // tail cutoff distance from a touched saddle
  double max_dxi = 0.02;    // target node spacing of the profile
  double quad_rtol = 1e-12;
};

struct ProfileNode {
  double xi = 0.0, g = 0.0, u = 0.0, du = 0.0;  // du = d u / d xi
};

// g(xi) recovered by quadrature, sampled on a strictly increasing xi
// grid with exact first and second derivatives at the nodes (quintic
// Hermite in between, so evaluation is C^2).
class WaveProfile {
 public:
  enum class Extension { none, tails, linear_periodic };

  struct Tail {  // exponential approach g -> g_limit beyond a cutoff
    double g_limit = 0.0, xi_cut = 0.0, eta_cut = 0.0;
    double u1 = 0.0, u2 = 0.0, u3 = 0.0;  // signed local series
  };

  double g(double xi) const;
  double u(double xi) const;
  double g_second(double xi) const;

  double xi_min() const { return nodes_.front().xi; }
  double xi_max() const { return nodes_.back().xi; }
  bool covers(double xi) const;

  Extension extension() const { return extension_; }
  double period() const { return Xi_; }  // linear_periodic only

  const std::vector<ProfileNode>& nodes() const { return nodes_; }

 private:
  friend WaveProfile quadrature_xi(const KineticCurve&, double, double,
                                   const QuadratureOptions&);
  friend WaveProfile profile_from_nodes(std::vector<ProfileNode>,
                                        WaveProfile::Extension, double,
                                        std::optional<Tail>,
                                        std::optional<Tail>);

  std::size_t locate(double xi) const;
  double reduce(double xi, double& g_shift) const;

  std::vector<ProfileNode> nodes_;
  Extension extension_ = Extension::none;
  double Xi_ = 0.0;
  std::optional<Tail> tail_lo_, tail_hi_;
};

WaveProfile quadrature_xi(const KineticCurve& curve, double g_anchor,
                          double xi_anchor, const QuadratureOptions& opt = {});

// Assembles a profile directly from nodes (first-order quadrature flows).
WaveProfile profile_from_nodes(
    std::vector<ProfileNode> nodes, WaveProfile::Extension ext, double Xi,
    std::optional<WaveProfile::Tail> tail_lo = std::nullopt,
    std::optional<WaveProfile::Tail> tail_hi = std::nullopt);

}  // namespace sgtw::phaseflow

#endif
