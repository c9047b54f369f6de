#include "sgtw/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgtw/detail/quadrature.hpp"
#include "sgtw/errors.hpp"
#include "sgtw/washboard.hpp"

namespace sgtw::families {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// xi of the profile point with g(xi) = g_target (profiles are strictly
// monotone in g).
double xi_at_g(const phaseflow::WaveProfile& p, double g_target) {
  double lo = p.xi_min(), hi = p.xi_max();
  const bool incr = p.g(hi) > p.g(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool below = p.g(mid) < g_target;
    if (below == incr)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double lorentz(double v) { return std::sqrt(1.0 - v * v); }

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::constant: return "constant";
    case Family::soliton: return "soliton";
    case Family::antisoliton: return "antisoliton";
    case Family::array: return "array";
    case Family::antiarray: return "antiarray";
    case Family::half_array: return "half_array";
    case Family::anti_half_array: return "anti_half_array";
  }
  return "unknown";
}

double WaveSolution::zeta_of(double x, double t) const {
  return cx * (x - phase_x0) + ct * t;
}

WaveSolution::FieldPoint WaveSolution::eval(double x, double t) const {
  FieldPoint out;
  if (family == Family::constant) {
    out.phi = phi_offset;
    return out;
  }
  const double zeta = zeta_of(x, t);
  double g, u;
  if (profile->covers(zeta)) {
    g = profile->g(zeta);
    u = profile->u(zeta);
  } else if (merge_profile) {
    g = merge_profile->g(zeta);
    u = merge_profile->u(zeta);
  } else {
    fail("out_of_profile_range", "(x,t) maps outside the covered range");
  }
  out.phi = sgn_g * g + phi_offset;
  out.phi_x = sgn_g * u * cx;
  out.phi_t = sgn_g * u * ct;
  return out;
}

WaveSolution::ProfilePoint WaveSolution::at_xi(double xi) const {
  ProfilePoint out;
  if (family == Family::constant) {
    out.g = phi_offset + kPi;
    out.phi = phi_offset;
    return out;
  }
  const double zeta = zeta_per_xi * xi;
  double g, u;
  if (profile->covers(zeta)) {
    g = profile->g(zeta);
    u = profile->u(zeta);
  } else if (merge_profile) {
    g = merge_profile->g(zeta);
    u = merge_profile->u(zeta);
  } else {
    fail("out_of_profile_range", "xi outside the covered range");
  }
  out.g = g;
  out.u = u * zeta_per_xi;  // dg/dxi
  out.phi = sgn_g * g + phi_offset;
  return out;
}

double velocity_from_mu(double mu, double alpha) {
  if (mu < 0.0) fail("param_out_of_range", "mu must be >= 0");
  if (mu == 0.0) return 0.0;
  return mu / std::sqrt(alpha * alpha + mu * mu);
}

double mu_from_velocity(double v, double alpha) {
  if (!(alpha > 0.0))
    fail("alpha_zero_inverse", "mu(v) needs alpha > 0");
  if (!(std::abs(v) < 1.0))
    fail("param_out_of_range", "mu(v) needs |v| < 1");
  return alpha * std::abs(v) / std::sqrt(1.0 - v * v);
}

WaveSolution build_constant(double gamma, bool include_unstable) {
  if (gamma < 0.0) fail("gamma_out_of_range", "gamma must be >= 0");
  WaveSolution sol;
  sol.family = Family::constant;
  sol.helicity = +1;
  sol.winding = 0;
  if (!include_unstable) {
    if (!(gamma < 1.0))
      fail("gamma_out_of_range",
           "no stable constant exists for gamma >= 1");
    sol.phi_offset = -std::asin(gamma);
  } else {
    if (gamma > 1.0)
      fail("gamma_out_of_range", "no constant solution exists for gamma > 1");
    sol.phi_offset = std::asin(gamma) + kPi;
    sol.unstable = true;
  }
  sol.params = SystemParams{0.0, gamma, 0.0, 0.0, +1};
  sol.phi_left_limit = sol.phi_right_limit = sol.phi_offset;
  return sol;
}

WaveSolution build_soliton(double gamma, double alpha, int helicity,
                           const shooting::ShootOptions& opt) {
  if (!(gamma > 0.0 && gamma < 1.0))
    fail("gamma_out_of_range", "soliton needs gamma in (0,1)");
  if (!(alpha > 0.0)) fail("param_out_of_range", "soliton needs alpha > 0");
  if (helicity != 1 && helicity != -1)
    fail("param_out_of_range", "helicity must be +1 or -1");

  auto shoot = shooting::solve_hat_mu(gamma, opt);
  const double g0 = washboard::g_max_point(gamma, 0);

  WaveSolution sol;
  sol.family = helicity > 0 ? Family::soliton : Family::antisoliton;
  sol.helicity = helicity;
  sol.winding = helicity;
  sol.hat_mu = shoot.mu_star;
  sol.balance_residual = shoot.balance_residual;
  sol.loop_I = shoot.loop_I;

  const double v_hat = velocity_from_mu(shoot.mu_star, alpha);
  const double v = helicity * v_hat;
  sol.params = SystemParams{alpha, gamma, shoot.mu_star, v, +1};
  sol.params.validate();

  sol.profile = phaseflow::quadrature_xi(shoot.curve, g0 + kPi, 0.0);
  const double s = lorentz(v);
  sol.cx = helicity / s;
  sol.ct = -helicity * v / s;
  sol.zeta_per_xi = helicity;
  sol.phi_offset = helicity > 0 ? -kPi : -3.0 * kPi;
  sol.phi_left_limit = -std::asin(gamma);
  sol.phi_right_limit = -std::asin(gamma) + helicity * kTwoPi;
  return sol;
}

namespace {

struct ResolvedArray {
  ParamChart chart;
  shooting::ShootResult per;
};

double curve_period(const phaseflow::KineticCurve& curve) {
  const double g0 = curve.g_left();
  auto f = [&](double s) { return 1.0 / std::sqrt(2.0 * curve.z(s)); };
  return detail::adaptive_gk(f, g0, g0 + kTwoPi, 1e-12, 1e-15, 48);
}

ResolvedArray resolve_array(double gamma, double alpha, ArrayParam which,
                            double value, const shooting::ShootOptions& opt) {
  if (!(gamma > 0.0)) fail("gamma_out_of_range", "array needs gamma > 0");
  if (!(alpha > 0.0)) fail("param_out_of_range", "array needs alpha > 0");

  ResolvedArray out;
  out.chart.gamma = gamma;
  out.chart.alpha = alpha;

  switch (which) {
    case ArrayParam::z_M: {
      if (!(value > 0.0)) fail("zm_non_positive", "z_M must be positive");
      out.per = shooting::solve_check_mu(gamma, value, opt);
      break;
    }
    case ArrayParam::mu: {
      if (!(value > 0.0) || !std::isfinite(value))
        fail("param_out_of_range",
             "mu must be positive and finite (mu = inf is the unit-velocity "
             "branch)");
      out.per = shooting::periodic_curve_at_mu(gamma, value, opt);
      break;
    }
    case ArrayParam::abs_v: {
      const double mu = mu_from_velocity(value, alpha);
      if (!(mu > 0.0)) fail("param_out_of_range", "|v| must be positive");
      out.per = shooting::periodic_curve_at_mu(gamma, mu, opt);
      break;
    }
    case ArrayParam::loop_I: {
      if (!(value > 0.0)) fail("param_out_of_range", "I must be positive");
      const double mu = kTwoPi * gamma / value;  // energy balance
      out.per = shooting::periodic_curve_at_mu(gamma, mu, opt);
      break;
    }
    case ArrayParam::Xi: {
      if (!(value > 0.0)) fail("param_out_of_range", "Xi must be positive");
      // Xi(mu) is strictly increasing; bracket in log mu and bisect.
      double lo, hi;
      if (gamma <= 1.0) {
        const double mu_hat = shooting::solve_hat_mu(gamma, opt).mu_star;
        lo = std::log(1e-6 * mu_hat);
        hi = std::log((1.0 - 1e-9) * mu_hat);
      } else {
        lo = std::log(1e-6);
        hi = std::log(300.0);
      }
      auto Xi_of = [&](double x) {
        auto per = shooting::periodic_curve_at_mu(gamma, std::exp(x), opt);
        return curve_period(per.curve);
      };
      if (Xi_of(lo) > value || Xi_of(hi) < value)
        fail("param_out_of_range", "Xi outside the attainable range");
      for (int it = 0; it < 60 && hi - lo > 1e-11; ++it) {
        const double mid = 0.5 * (lo + hi);
        (Xi_of(mid) < value ? lo : hi) = mid;
      }
      out.per = shooting::periodic_curve_at_mu(gamma, std::exp(0.5 * (lo + hi)),
                                               opt);
      break;
    }
  }

  out.chart.mu = out.per.mu_star;
  out.chart.z_M = out.per.z_M;
  out.chart.loop_I = out.per.loop_I;
  out.chart.Xi = curve_period(out.per.curve);
  out.chart.abs_v = velocity_from_mu(out.per.mu_star, alpha);
  return out;
}

}  // namespace

ParamChart array_param_chart(double gamma, double alpha, ArrayParam which,
                             double value, const shooting::ShootOptions& opt) {
  return resolve_array(gamma, alpha, which, value, opt).chart;
}

WaveSolution build_array(double gamma, double alpha, int helicity,
                         ArrayParam which, double value,
                         const shooting::ShootOptions& opt) {
  if (helicity != 1 && helicity != -1)
    fail("param_out_of_range", "helicity must be +1 or -1");
  auto res = resolve_array(gamma, alpha, which, value, opt);

  WaveSolution sol;
  sol.family = helicity > 0 ? Family::array : Family::antiarray;
  sol.helicity = helicity;
  sol.winding = helicity;
  sol.balance_residual = res.per.balance_residual;
  sol.loop_I = res.per.loop_I;
  sol.z_M = res.per.z_M;

  const double v = helicity * res.chart.abs_v;
  sol.params = SystemParams{alpha, gamma, res.chart.mu, v, +1};
  sol.params.validate();

  const double g0 = res.per.curve.g_left();
  sol.profile = phaseflow::quadrature_xi(res.per.curve, g0 + kPi, 0.0);
  sol.Xi = sol.profile->period();
  sol.X = *sol.Xi * lorentz(v);
  const double s = lorentz(v);
  sol.cx = helicity / s;
  sol.ct = -helicity * v / s;
  sol.zeta_per_xi = helicity;
  sol.phi_offset = -kPi;
  return sol;
}

WaveSolution build_array_unit_velocity(double gamma, double alpha,
                                       int helicity, int samples) {
  if (!(gamma > 1.0))
    fail("mu_infinity_requires_gamma_above_one",
         "mu = infinity needs gamma > 1");
  if (helicity != 1 && helicity != -1)
    fail("param_out_of_range", "helicity must be +1 or -1");
  auto uv = shooting::unit_velocity_profile(gamma, alpha, samples);

  WaveSolution sol;
  sol.family = helicity > 0 ? Family::array : Family::antiarray;
  sol.helicity = helicity;
  sol.winding = helicity;
  sol.unit_velocity_branch = true;
  sol.params = SystemParams{alpha, gamma,
                            std::numeric_limits<double>::infinity(),
                            static_cast<double>(helicity), +1};
  sol.profile = std::move(uv.profile);
  sol.Xi = uv.Xi;
  sol.X = uv.Xi;  // xi = helicity*x - t carries no Lorentz factor
  sol.cx = helicity;
  sol.ct = -1.0;
  sol.zeta_per_xi = 1.0;
  sol.phi_offset = -kPi;
  return sol;
}

WaveSolution build_half_array(double gamma, double alpha, int helicity,
                              double mu, const shooting::ShootOptions& opt) {
  if (helicity != 1 && helicity != -1)
    fail("param_out_of_range", "helicity must be +1 or -1");
  if (!(alpha > 0.0)) fail("param_out_of_range", "half-array needs alpha > 0");
  auto ha = shooting::half_array_curve(gamma, mu, opt);

  WaveSolution sol;
  sol.family = helicity > 0 ? Family::half_array : Family::anti_half_array;
  sol.helicity = helicity;
  sol.winding = helicity;
  sol.hat_mu = ha.hat_mu;
  sol.z_M = ha.z_M;
  sol.merge_rho = ha.rho_offset;

  const double v = helicity * velocity_from_mu(mu, alpha);
  sol.params = SystemParams{alpha, gamma, mu, v, +1};
  sol.params.validate();

  const double g0 = washboard::g_max_point(gamma, 0);
  sol.profile = phaseflow::quadrature_xi(ha.zbar, g0 + kPi, 0.0);
  // align the periodic reference so the two profiles merge as zeta grows
  const double xi_ref = xi_at_g(*sol.profile, ha.g_ref);
  sol.merge_profile = phaseflow::quadrature_xi(ha.zcheck, ha.g_ref,
                                               xi_ref + ha.rho_offset);
  sol.loop_I = phaseflow::loop_integral(ha.zcheck, g0);
  sol.balance_residual = std::abs(mu * *sol.loop_I - kTwoPi * gamma);

  const double s = lorentz(v);
  sol.cx = helicity / s;
  sol.ct = -helicity * v / s;
  sol.zeta_per_xi = helicity;
  sol.phi_offset = -kPi;
  sol.phi_left_limit = -std::asin(gamma);  // at x -> -helicity * inf
  return sol;
}

WaveSolution build_unit_velocity_kink_unstable(double gamma, double alpha,
                                               int helicity, int samples) {
  if (!(gamma >= 0.0 && gamma < 1.0))
    fail("gamma_out_of_range", "the unstable |v| = 1 kink needs gamma < 1");
  if (!(alpha > 0.0)) fail("param_out_of_range", "alpha must be positive");
  if (helicity != 1 && helicity != -1)
    fail("param_out_of_range", "helicity must be +1 or -1");

  // alpha g' = gamma - sin g rises from the maximum angle g_0^M to the
  // next rest angle asin(gamma) + 2 pi; both ends are simple roots, so
  // the approach is exponential.
  const double ga = washboard::g_max_point(gamma, 0);
  const double gb = std::asin(gamma) + kTwoPi;
  const double c = std::sqrt(1.0 - gamma * gamma) / alpha;
  const double cut = 1e-7 * (gb - ga);
  const double lo = ga + cut, hi = gb - cut;

  std::vector<phaseflow::ProfileNode> nodes(samples + 1);
  auto f = [&](double s) { return alpha / (gamma - std::sin(s)); };
  double xi = 0.0;
  for (int i = 0; i <= samples; ++i) {
    // geometric clustering toward both ends
    const double t = static_cast<double>(i) / samples;
    const double w = 0.5 * (1.0 - std::cos(kPi * t));
    const double g = lo + (hi - lo) * w;
    if (i > 0) {
      const double t0 = static_cast<double>(i - 1) / samples;
      const double g_prev = lo + (hi - lo) * 0.5 * (1.0 - std::cos(kPi * t0));
      xi += detail::adaptive_gk(f, g_prev, g, 1e-12, 1e-15, 48);
    }
    const double u = (gamma - std::sin(g)) / alpha;
    nodes[i] = {xi, g, u, -std::cos(g) / alpha * u};
  }
  const double xi_mid = xi_at_g(
      phaseflow::profile_from_nodes(std::vector<phaseflow::ProfileNode>(nodes),
                                    phaseflow::WaveProfile::Extension::none,
                                    0.0),
      0.5 * (ga + gb));
  for (auto& n : nodes) n.xi -= xi_mid;

  phaseflow::WaveProfile::Tail tl, th;
  tl.g_limit = ga;
  tl.xi_cut = nodes.front().xi;
  tl.eta_cut = nodes.front().g - ga;
  tl.u1 = c;
  th.g_limit = gb;
  th.xi_cut = nodes.back().xi;
  th.eta_cut = nodes.back().g - gb;
  th.u1 = -c;  // g' = -c (g - gb) near the upper rest angle

  WaveSolution sol;
  sol.family = helicity > 0 ? Family::soliton : Family::antisoliton;
  sol.helicity = helicity;
  sol.winding = helicity;
  sol.unstable = true;
  sol.unit_velocity_branch = true;
  sol.params = SystemParams{alpha, gamma,
                            std::numeric_limits<double>::infinity(),
                            static_cast<double>(helicity), +1};
  sol.profile = phaseflow::profile_from_nodes(
      std::move(nodes), phaseflow::WaveProfile::Extension::tails, 0.0, tl, th);
  sol.cx = helicity;
  sol.ct = -1.0;
  sol.zeta_per_xi = 1.0;
  sol.phi_offset = -kPi;
  sol.phi_left_limit = ga - kPi;
  sol.phi_right_limit = gb - kPi;
  return sol;
}

WaveSolution build_soliton_superluminal_unstable(
    double gamma, double alpha, int helicity,
    const shooting::ShootOptions& opt) {
  if (!(gamma > 0.0 && gamma < 1.0))
    fail("gamma_out_of_range", "needs gamma in (0,1)");
  if (!(alpha > 0.0)) fail("param_out_of_range", "alpha must be positive");
  auto shoot = shooting::solve_hat_mu(gamma, opt);
  if (!(shoot.mu_star > alpha * (1.0 + 1e-12)))
    fail("param_out_of_range",
         "no superluminal branch: mu_hat(gamma) <= alpha");
  const double vabs =
      shoot.mu_star / std::sqrt(shoot.mu_star * shoot.mu_star - alpha * alpha);
  const double v = helicity * vabs;
  const double r = std::sqrt(v * v - 1.0);
  const double g0 = washboard::g_max_point(gamma, 0);

  WaveSolution sol;
  sol.family = helicity > 0 ? Family::soliton : Family::antisoliton;
  sol.helicity = helicity;
  sol.winding = -helicity;  // phi = -g flips the twist
  sol.unstable = true;
  sol.hat_mu = shoot.mu_star;
  sol.balance_residual = shoot.balance_residual;
  sol.params = SystemParams{alpha, gamma, shoot.mu_star, v, +1};
  sol.profile = phaseflow::quadrature_xi(shoot.curve, g0 + kPi, 0.0);
  sol.sgn_g = -1.0;
  sol.phi_offset = 0.0;
  // zeta = -sign(v) (x - v t) / sqrt(v^2 - 1)
  sol.cx = -helicity / r;
  sol.ct = helicity * v / r;
  sol.zeta_per_xi = 1.0;
  // x -> -inf maps to zeta -> +helicity*inf, and phi = -g
  sol.phi_left_limit = -(helicity > 0 ? g0 + kTwoPi : g0);
  sol.phi_right_limit = -(helicity > 0 ? g0 : g0 + kTwoPi);
  return sol;
}

double energy_density(const WaveSolution& sol, double x, double t) {
  const auto f = sol.eval(x, t);
  return 0.5 * f.phi_t * f.phi_t + 0.5 * f.phi_x * f.phi_x +
         sol.params.gamma * f.phi - std::cos(f.phi);
}

CircleWrap circle_wrap(const WaveSolution& sol, int m) {
  if (sol.family != Family::array && sol.family != Family::antiarray)
    fail("not_an_array", "only array solutions close up on a circle");
  if (m < 1) fail("param_out_of_range", "m must be a positive integer");
  CircleWrap w;
  w.m = m;
  w.X = *sol.X;
  w.L = m * w.X;
  return w;
}

WaveSolution::FieldPoint eval_on_circle(const WaveSolution& sol,
                                        const CircleWrap& wrap, double x,
                                        double t) {
  const double j = std::floor(x / wrap.L);
  const double xr = x - j * wrap.L;
  auto f = sol.eval(xr, t);
  f.phi += j * wrap.m * kTwoPi * sol.helicity;
  return f;
}

}  // namespace sgtw::families
