#include "sgtw/washboard.hpp"

#include <cmath>

#include "sgtw/errors.hpp"

namespace sgtw {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kGammaOneTol = 1e-14;
}  // namespace

SystemParams SystemParams::from_mu(double alpha, double gamma, double mu,
                                   int epsilon) {
  SystemParams p;
  p.alpha = alpha;
  p.gamma = gamma;
  p.mu = mu;
  p.epsilon = epsilon;
  p.v = (alpha > 0.0 || mu > 0.0)
            ? mu / std::sqrt(alpha * alpha + mu * mu)
            : 0.0;
  p.validate();
  return p;
}

SystemParams SystemParams::from_velocity(double alpha, double gamma, double v,
                                         int epsilon) {
  if (std::abs(v) >= 1.0)
    fail("param_out_of_range", "|v| must be < 1 to derive mu");
  SystemParams p;
  p.alpha = alpha;
  p.gamma = gamma;
  p.v = v;
  p.epsilon = epsilon;
  p.mu = alpha * std::abs(v) / std::sqrt(1.0 - v * v);
  p.validate();
  return p;
}

void SystemParams::validate() const {
  if (gamma < 0.0) fail("param_out_of_range", "gamma must be >= 0");
  if (mu < 0.0) fail("param_out_of_range", "mu must be >= 0");
  if (alpha < 0.0) fail("param_out_of_range", "alpha must be >= 0");
  if (epsilon != 1 && epsilon != -1)
    fail("param_out_of_range", "epsilon must be +1 or -1");
  if (alpha > 0.0 && std::abs(v) < 1.0) {
    const double mu_of_v =
        (v == 0.0) ? 0.0 : alpha / std::sqrt(1.0 / (v * v) - 1.0);
    if (std::abs(mu_of_v - mu) > 1e-12 * (1.0 + std::abs(mu)))
      fail("param_out_of_range", "mu and v are inconsistent");
  }
}

namespace washboard {

double potential(double g, double gamma) { return -(std::cos(g) + gamma * g); }

double potential_slope(double g, double gamma) { return std::sin(g) - gamma; }

bool is_degenerate_gamma(double gamma) {
  return std::abs(gamma - 1.0) <= kGammaOneTol;
}

double g_min_point(double gamma, int k) {
  return std::asin(gamma) + 2.0 * k * kPi;
}

double g_max_point(double gamma, int k) {
  return -std::asin(gamma) + (2.0 * k + 1.0) * kPi;
}

std::vector<CriticalPoint> critical_points(double gamma, int k_lo, int k_hi) {
  std::vector<CriticalPoint> out;
  if (gamma < 0.0) fail("param_out_of_range", "gamma must be >= 0");
  if (k_hi < k_lo) return out;
  if (is_degenerate_gamma(gamma)) {
    for (int k = k_lo; k <= k_hi; ++k)
      out.push_back({(2.0 * k + 0.5) * kPi, k, CriticalKind::inflection});
    return out;
  }
  if (gamma > 1.0) return out;
  for (int k = k_lo; k <= k_hi; ++k) {
    out.push_back({g_min_point(gamma, k), k, CriticalKind::minimum});
    out.push_back({g_max_point(gamma, k), k, CriticalKind::maximum});
  }
  return out;
}

SingularPointReport classify_singular_point(const CriticalPoint& p, double mu,
                                            double gamma) {
  if (gamma > 1.0 && !is_degenerate_gamma(gamma))
    fail("gamma_out_of_range", "no singular points exist for gamma > 1");
  if (mu < 0.0) fail("param_out_of_range", "mu must be >= 0");

  SingularPointReport rep;
  rep.point = p;

  if (p.kind == CriticalKind::inflection || is_degenerate_gamma(gamma)) {
    // lambda^2 + mu*lambda = 0
    rep.lambda1 = {0.0, 0.0};
    rep.lambda2 = {-mu, 0.0};
    rep.classification = SingularKind::saddle_node;
    return rep;
  }

  const double s = std::sqrt(1.0 - gamma * gamma);
  if (p.kind == CriticalKind::maximum) {
    // lambda^2 + mu*lambda - s = 0: real roots of opposite sign.
    const double disc = std::sqrt(mu * mu + 4.0 * s);
    rep.lambda1 = {0.5 * (-mu + disc), 0.0};
    rep.lambda2 = {0.5 * (-mu - disc), 0.0};
    rep.classification = SingularKind::saddle;
    return rep;
  }

  // Minimum: lambda^2 + mu*lambda + s = 0.
  const double disc = mu * mu - 4.0 * s;
  if (mu == 0.0) {
    const double w = std::sqrt(s);
    rep.lambda1 = {0.0, w};
    rep.lambda2 = {0.0, -w};
    rep.classification = SingularKind::center;
  } else if (disc < 0.0) {
    const double w = 0.5 * std::sqrt(-disc);
    rep.lambda1 = {-0.5 * mu, w};
    rep.lambda2 = {-0.5 * mu, -w};
    rep.classification = SingularKind::focus;
  } else {
    const double r = std::sqrt(disc);
    rep.lambda1 = {0.5 * (-mu + r), 0.0};
    rep.lambda2 = {0.5 * (-mu - r), 0.0};
    rep.classification = SingularKind::node;
  }
  return rep;
}

double SeparatrixSlopes::get(int eps_prime, int eps) const {
  if (eps_prime > 0) return eps > 0 ? pp : pm;
  return eps > 0 ? mp : mm;
}

SeparatrixSlopes separatrix_slopes(double mu, double gamma) {
  if (gamma >= 1.0)
    fail("gamma_out_of_range", "separatrix slopes require gamma < 1");
  if (mu < 0.0) fail("param_out_of_range", "mu must be >= 0");
  const double root = std::sqrt(mu * mu + 4.0 * std::sqrt(1.0 - gamma * gamma));
  SeparatrixSlopes s;
  s.pp = 0.5 * (mu + root);
  s.pm = 0.5 * (mu - root);
  s.mp = 0.5 * (-mu + root);
  s.mm = 0.5 * (-mu - root);
  return s;
}

}  // namespace washboard
}  // namespace sgtw
