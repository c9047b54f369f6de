#include "sgtw/shooting.hpp"

#include <algorithm>
#include <cmath>

#include "sgtw/detail/quadrature.hpp"
#include "sgtw/errors.hpp"
#include "sgtw/washboard.hpp"

namespace sgtw::shooting {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double launch_point(double gamma) {
  return gamma < 1.0 ? washboard::g_max_point(gamma, 0) : -0.5 * kPi;
}

// Sign of the shooting criterion for the heteroclinic connection:
// positive when the separatrix arrives at the next saddle with z > 0
// (mu too small), negative when z vanishes on the way (mu too large).
double hat_criterion(double gamma, double mu, const ShootOptions& opt,
                     phaseflow::KineticCurve* out = nullptr) {
  const double g0 = washboard::g_max_point(gamma, 0);
  const double g1 = g0 + kTwoPi;
  SystemParams P = SystemParams::from_mu(0.0, gamma, mu, +1);
  auto curve = phaseflow::integrate_z(g0, 0.0, P, +1, kTwoPi, opt.integ);
  double crit;
  if (curve.termination() == phaseflow::Termination::span) {
    crit = curve.z_end();
  } else {
    crit = -std::max(g1 - curve.g_right(), 1e-300);
  }
  if (out) *out = std::move(curve);
  return crit;
}

// Criterion for the periodic orbit: z(g0 + 2 pi) - z_M, monotone
// decreasing in mu; early vanishing counts as a large deficit.
double check_criterion(double gamma, double mu, double z_M,
                       const ShootOptions& opt,
                       phaseflow::KineticCurve* out = nullptr) {
  const double g0 = launch_point(gamma);
  SystemParams P = SystemParams::from_mu(0.0, gamma, mu, +1);
  phaseflow::IntegrateOptions io = opt.integ;
  io.z_blowup = std::max(io.z_blowup, 4.0 * (z_M + kTwoPi * gamma + 2.0));
  auto curve = phaseflow::integrate_z(g0, z_M, P, +1, kTwoPi, io);
  double crit;
  if (curve.endpoint_right() == phaseflow::EndpointKind::truncated) {
    crit = curve.z_values().back() - z_M;
  } else {
    crit = -z_M - (g0 + kTwoPi - curve.g_right());
  }
  if (out) *out = std::move(curve);
  return crit;
}

// Builds the periodic curve at (mu, z_M) and fills the residual fields.
void finalize_periodic(ShootResult& res, double gamma, double mu, double z_M,
                       const ShootOptions& opt) {
  const double g0 = launch_point(gamma);
  SystemParams P = SystemParams::from_mu(0.0, gamma, mu, +1);
  phaseflow::IntegrateOptions io = opt.integ;
  io.z_blowup = std::max(io.z_blowup, 4.0 * (z_M + kTwoPi * gamma + 2.0));
  auto one = phaseflow::integrate_z(g0, z_M, P, +1, kTwoPi, io);
  auto two = phaseflow::integrate_z(g0, z_M, P, +1, 2.0 * kTwoPi, io);
  double pres = 0.0;
  const double g_hi = std::min(two.g_right() - kTwoPi, g0 + kTwoPi);
  for (int i = 0; i <= 64; ++i) {
    const double g = g0 + (g_hi - g0) * i / 64.0;
    pres = std::max(pres, std::abs(two.z(g + kTwoPi) - two.z(g)));
  }
  res.z_M = z_M;
  res.mu_star = mu;
  res.periodicity_residual = pres;
  res.curve = phaseflow::periodic_extension(one, pres);
  res.loop_I = phaseflow::loop_integral(res.curve, g0);
  res.balance_residual = std::abs(mu * res.loop_I - kTwoPi * gamma);
}

}  // namespace

double hat_mu_lower_bound(double gamma) {
  const double s = std::sqrt(1.0 - gamma * gamma);
  return std::sqrt(std::sqrt(3.0 * (1.0 - gamma * gamma) + 1.0) - 2.0 * s);
}

double hat_mu_upper_bound(double gamma) {
  return std::sqrt(2.0 * (1.0 - std::sqrt(1.0 - gamma * gamma)));
}

ShootResult solve_hat_mu(double gamma, const ShootOptions& opt) {
  if (!(gamma > 0.0 && gamma <= 0.999))
    fail("gamma_out_of_range", "solve_hat_mu needs gamma in (0, 0.999]");

  ShootResult res;
  double lo = 0.9 * hat_mu_lower_bound(gamma);
  double hi = 1.1 * hat_mu_upper_bound(gamma);

  double f_lo = hat_criterion(gamma, lo, opt);
  for (int i = 0; i < 8 && f_lo <= 0.0; ++i) {
    lo *= 0.5;
    f_lo = hat_criterion(gamma, lo, opt);
  }
  double f_hi = hat_criterion(gamma, hi, opt);
  for (int i = 0; i < 8 && f_hi >= 0.0; ++i) {
    hi *= 1.5;
    f_hi = hat_criterion(gamma, hi, opt);
  }
  if (f_lo <= 0.0 || f_hi >= 0.0)
    fail("bracket_failure", "shooting criterion does not change sign");

  res.bracket_history.emplace_back(lo, hi);
  while (hi - lo > opt.mu_tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (hat_criterion(gamma, mid, opt) > 0.0)
      lo = mid;
    else
      hi = mid;
    res.bracket_history.emplace_back(lo, hi);
  }
  res.mu_star = 0.5 * (lo + hi);

  phaseflow::KineticCurve curve;
  hat_criterion(gamma, res.mu_star, opt, &curve);
  const double g0 = washboard::g_max_point(gamma, 0);
  curve = phaseflow::clamp_endpoint_to_saddle(curve, +1, g0 + kTwoPi);
  res.loop_I = phaseflow::loop_integral(curve, g0);
  res.balance_residual = std::abs(res.mu_star * res.loop_I - kTwoPi * gamma);
  res.curve = std::move(curve);
  return res;
}

ShootResult solve_check_mu(double gamma, double z_M, const ShootOptions& opt) {
  if (!(z_M > 0.0)) fail("zm_non_positive", "z_M must be positive");
  if (!(gamma > 0.0)) fail("gamma_out_of_range", "gamma must be positive");

  ShootResult res;
  res.z_M = z_M;

  double lo = 0.0;  // criterion is +2 pi gamma by energy conservation
  double hi = 10.0;
  if (gamma <= 1.0) hi = std::max(hi, 1.1 * hat_mu_upper_bound(gamma));
  if (gamma > 1.0)
    hi = std::max(hi, 2.0 * (gamma - 1.0) / std::sqrt(2.0 * z_M));
  double f_hi = check_criterion(gamma, hi, z_M, opt);
  for (int i = 0; i < 60 && f_hi >= 0.0; ++i) {
    hi *= 2.0;
    f_hi = check_criterion(gamma, hi, z_M, opt);
  }
  if (f_hi >= 0.0)
    fail("bracket_failure", "periodicity criterion does not change sign");

  res.bracket_history.emplace_back(lo, hi);
  while (hi - lo > opt.mu_tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (check_criterion(gamma, mid, z_M, opt) > 0.0)
      lo = mid;
    else
      hi = mid;
    res.bracket_history.emplace_back(lo, hi);
  }
  res.mu_star = 0.5 * (lo + hi);

  finalize_periodic(res, gamma, res.mu_star, z_M, opt);
  return res;
}

ShootResult periodic_curve_at_mu(double gamma, double mu,
                                 const ShootOptions& opt) {
  if (!(gamma > 0.0)) fail("gamma_out_of_range", "gamma must be positive");
  if (!(mu > 0.0)) fail("param_out_of_range", "mu must be positive");

  // H(z_M) = z(g0 + 2 pi; z_M) - z_M is strictly decreasing in z_M.
  auto H = [&](double z_M) { return check_criterion(gamma, mu, z_M, opt); };

  double x_lo, x_hi;  // log z_M bracket: H(exp(x_lo)) > 0 > H(exp(x_hi))
  {
    double z = (gamma > 1.0)
                   ? 0.5 * std::pow((gamma - 1.0) / mu, 2)
                   : 0.5;
    z = std::max(z, 1e-10);
    double f = H(z);
    if (f > 0.0) {
      x_lo = std::log(z);
      double zu = z;
      for (int i = 0;; ++i) {
        if (i >= 80) fail("bracket_failure", "no periodic orbit bracket");
        zu *= 2.0;
        if (H(zu) <= 0.0) break;
      }
      x_hi = std::log(zu);
    } else {
      x_hi = std::log(z);
      double zd = z;
      bool found = false;
      for (int i = 0; i < 80; ++i) {
        zd *= 0.25;
        if (zd < 1e-14) break;
        if (H(zd) > 0.0) {
          found = true;
          break;
        }
      }
      if (!found)
        fail("mu_not_below_hat_mu",
             "no periodic orbit at this mu (mu >= mu_hat)");
      x_lo = std::log(zd);
    }
  }

  // safeguarded secant (false position with bisection fallback)
  double f_lo = H(std::exp(x_lo)), f_hi = H(std::exp(x_hi));
  double x_mid = 0.5 * (x_lo + x_hi);
  for (int it = 0; it < 200 && x_hi - x_lo > 1e-13; ++it) {
    double x_try = x_lo - f_lo * (x_hi - x_lo) / (f_hi - f_lo);
    const double margin = 0.05 * (x_hi - x_lo);
    if (!(x_try > x_lo + margin && x_try < x_hi - margin))
      x_try = 0.5 * (x_lo + x_hi);
    const double f_try = H(std::exp(x_try));
    if (f_try > 0.0) {
      x_lo = x_try;
      f_lo = f_try;
    } else {
      x_hi = x_try;
      f_hi = f_try;
    }
    x_mid = 0.5 * (x_lo + x_hi);
  }

  ShootResult res;
  res.bracket_history.emplace_back(std::exp(x_lo), std::exp(x_hi));
  finalize_periodic(res, gamma, mu, std::exp(x_mid), opt);
  return res;
}

HalfArrayCurve half_array_curve(double gamma, double mu,
                                const ShootOptions& opt) {
  if (!(gamma > 0.0 && gamma < 1.0))
    fail("gamma_out_of_range", "half-array needs gamma in (0,1)");
  if (opt.half_array_span < 3)
    fail("span_too_short", "decay fit needs at least 3 periods");

  HalfArrayCurve out;
  auto hat = solve_hat_mu(gamma, opt);
  out.hat_mu = hat.mu_star;
  if (!(mu > 0.0 && mu < hat.mu_star))
    fail("mu_not_below_hat_mu", "half-array needs 0 < mu < mu_hat(gamma)");
  out.mu = mu;

  const double g0 = washboard::g_max_point(gamma, 0);
  const double span = kTwoPi * opt.half_array_span;
  SystemParams P = SystemParams::from_mu(0.0, gamma, mu, +1);
  out.zbar = phaseflow::integrate_z(g0, 0.0, P, +1, span, opt.integ);
  if (out.zbar.endpoint_right() != phaseflow::EndpointKind::truncated)
    fail("bracket_failure", "separatrix did not persist over the span");

  auto per = periodic_curve_at_mu(gamma, mu, opt);
  out.zcheck = per.curve;
  out.z_M = per.z_M;
  out.w0 = -per.z_M;

  const int n = 200 * opt.half_array_span;
  out.g_samples.resize(n + 1);
  out.w_samples.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double g = g0 + span * i / n;
    out.g_samples[i] = g;
    out.w_samples[i] = out.zbar.z(g) - out.zcheck.z(g);
  }

  // least-squares slope of log|w| over the last 60% of the span
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int i = 0; i <= n; ++i) {
      if (out.g_samples[i] < g0 + 0.4 * span) continue;
      const double w = std::abs(out.w_samples[i]);
      if (w <= 0.0) continue;
      const double x = out.g_samples[i], y = std::log(w);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
    if (m < 10) fail("span_too_short", "too few samples for the decay fit");
    out.decay_rate = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  double zc_max = 0.0;
  for (int i = 0; i <= 256; ++i)
    zc_max = std::max(zc_max, out.zcheck.z(g0 + kTwoPi * i / 256.0));
  out.decay_rate_bound = mu / std::sqrt(2.0 * (zc_max + std::abs(out.w0)));

  // 'time' offset between the separatrix and the periodic orbit,
  // anchored one period in from the launch point
  out.g_ref = g0 + kTwoPi;
  {
    auto f = [&](double s) {
      return 1.0 / std::sqrt(2.0 * out.zbar.z(s)) -
             1.0 / std::sqrt(2.0 * out.zcheck.z(s));
    };
    out.rho_offset =
        detail::adaptive_gk(f, out.g_ref, g0 + span, 1e-11, 1e-14, 48);
  }
  return out;
}

UnitVelocityProfile unit_velocity_profile(double gamma, double alpha,
                                          int samples) {
  if (!(gamma > 1.0))
    fail("gamma_not_above_one", "the v = +-1 branch needs gamma > 1");
  if (!(alpha > 0.0)) fail("param_out_of_range", "alpha must be positive");
  if (samples < 16) fail("param_out_of_range", "need at least 16 samples");

  UnitVelocityProfile out;
  std::vector<phaseflow::ProfileNode> nodes(samples + 1);
  auto f = [&](double s) { return alpha / (gamma - std::sin(s)); };
  double xi = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double g = kTwoPi * i / samples;
    if (i > 0)
      xi += detail::adaptive_gk(f, kTwoPi * (i - 1.0) / samples, g, 1e-13,
                                1e-16, 40);
    const double u = (gamma - std::sin(g)) / alpha;
    nodes[i].xi = xi;
    nodes[i].g = g;
    nodes[i].u = u;
    nodes[i].du = -std::cos(g) / alpha * u;
  }
  out.Xi = xi;
  out.profile = phaseflow::profile_from_nodes(
      std::move(nodes), phaseflow::WaveProfile::Extension::linear_periodic,
      xi);
  return out;
}

ArrayLeadingOrder array_leading_order(double gamma, double z_M, double alpha) {
  if (!(gamma > 1.0))
    fail("gamma_not_above_one", "leading-order forms need gamma > 1");
  if (!(z_M > 0.0)) fail("zm_non_positive", "z_M must be positive");
  ArrayLeadingOrder out;
  const double r = std::sqrt(2.0 * z_M);
  out.mu = (gamma - 1.0) / r;
  out.I = r * kTwoPi * gamma / (gamma - 1.0);
  out.Xi_scaling = 1.0 / std::sqrt(z_M);
  out.v = (gamma - 1.0) /
          std::sqrt(2.0 * z_M * alpha * alpha + (gamma - 1.0) * (gamma - 1.0));
  return out;
}

}  // namespace sgtw::shooting
