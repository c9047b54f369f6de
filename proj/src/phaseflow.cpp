#include "sgtw/phaseflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgtw/detail/quadrature.hpp"
#include "sgtw/errors.hpp"
#include "sgtw/washboard.hpp"

namespace sgtw::phaseflow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct SaddleSeries {
  double u1 = 0.0, u2 = 0.0, u3 = 0.0;
};

// Local expansion u = u1*eta + u2*eta^2 + u3*eta^3 of a separatrix at a
// saddle; branch selects the unstable (+1) or stable (-1) line.
SaddleSeries saddle_series(double mu, double gamma, int branch) {
  const double s = std::sqrt(1.0 - gamma * gamma);
  const double root = std::sqrt(mu * mu + 4.0 * s);
  SaddleSeries out;
  out.u1 = 0.5 * (-mu + branch * root);
  out.u2 = gamma / (2.0 * (3.0 * out.u1 + mu));
  out.u3 = -(2.0 * out.u2 * out.u2 + s / 6.0) / (4.0 * out.u1 + mu);
  return out;
}

double series_band(const SaddleSeries& s) {
  double band = 3e-3;
  if (s.u2 != 0.0) band = std::min(band, 0.1 * std::abs(s.u1 / s.u2));
  if (s.u3 != 0.0) band = std::min(band, std::sqrt(0.1 * std::abs(s.u1 / s.u3)));
  return std::max(band, 1e-5);
}

// Nearest maximum of the washboard potential (saddle of the flow).
double nearest_saddle(double gamma, double g) {
  const double a = std::asin(std::min(gamma, 1.0));
  const double k = std::round((g + a - kPi) / kTwoPi);
  return -a + (2.0 * k + 1.0) * kPi;
}

struct RawResult {
  enum class Term { span, zero, blowup };
  Term term = Term::span;
  std::vector<detail::Dp5Segment> segs;
  std::vector<double> tau_nodes;  // accepted-step boundaries
  std::vector<double> u_nodes;
  double tau_begin = 0.0, tau_end = 0.0;
  double u_end = 0.0;
  double g_stop = 0.0;  // zero termination: extrapolated vanishing point
};

// March u(tau), g = g0 + dir*tau, from (tau_start, u_start) up to tau =
// span.  Terminates early when |u| reaches the floor (z -> 0) or z blows
// up.  u never changes sign along a valid piece.
RawResult integrate_raw(double g0, int dir, double tau_start, double u_start,
                        double span, const SystemParams& P,
                        const IntegrateOptions& opt) {
  const double mu = P.mu, gamma = P.gamma;
  auto rhs = [g0, dir, mu, gamma](double tau, double u) {
    const double g = g0 + dir * tau;
    return dir * ((gamma - std::sin(g)) / u - mu);
  };
  detail::Dp5Stepper<decltype(rhs)> stepper(rhs, opt.rtol, opt.atol);

  RawResult out;
  out.tau_begin = tau_start;
  double tau = tau_start;
  double u = u_start;
  out.tau_nodes.push_back(tau);
  out.u_nodes.push_back(u);

  double k1 = rhs(tau, u);
  double h = std::min({1e-3, 0.25 * (span - tau),
                       0.01 * std::abs(u / (k1 == 0.0 ? 1e-30 : k1))});
  h = std::max(h, 1e-14);
  const double h_min = 1e-14;

  auto finish_zero = [&](double tau_cut, double u_cut) {
    const double g = g0 + dir * tau_cut;
    const double z = 0.5 * u_cut * u_cut;
    const double zg = gamma - std::sin(g) - mu * std::abs(u_cut);
    const double dzdtau = dir * zg;
    double extra = 0.0;
    if (dzdtau < 0.0) extra = std::min(z / (-dzdtau), 1.0);
    out.term = RawResult::Term::zero;
    out.tau_end = tau_cut;
    out.u_end = u_cut;
    out.g_stop = g0 + dir * (tau_cut + extra);
  };

  std::size_t steps = 0;
  while (true) {
    if (++steps > opt.max_steps)
      fail("integrator_failure", "step budget exhausted");
    const bool last = (tau + h >= span);
    if (last) h = span - tau;

    const auto trial = stepper.attempt(tau, u, h, k1);
    if (trial.err > 1.0) {
      const double h_new = detail::Dp5Stepper<decltype(rhs)>::next_h(h, trial.err);
      if (h_new < h_min) {
        if (std::abs(u) < 1e-4) {
          finish_zero(tau, u);
          return out;
        }
        fail("integrator_failure", "step size underflow");
      }
      h = h_new;
      continue;
    }

    // vanishing-z event inside the accepted step
    if (trial.y1 * u <= 0.0 || std::abs(trial.y1) <= opt.u_floor) {
      // first theta where |u| falls to the floor, by bisection on the
      // dense output (|u| is heading to zero monotonically here)
      double lo = 0.0, hi = 1.0;
      const double target = opt.u_floor;
      auto below = [&](double th) {
        const double uv = trial.seg.eval(tau + th * h);
        return uv * u <= 0.0 || std::abs(uv) <= target;
      };
      if (!below(1.0)) {
        // only the floor test triggered exactly at the node
        lo = hi = 1.0;
      } else {
        for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
          const double mid = 0.5 * (lo + hi);
          (below(mid) ? hi : lo) = mid;
        }
      }
      const double tau_cut = tau + hi * h;
      const double u_cut = trial.seg.eval(tau_cut);
      out.segs.push_back(trial.seg);
      out.tau_nodes.push_back(tau_cut);
      out.u_nodes.push_back(u_cut);
      finish_zero(tau_cut, u_cut);
      return out;
    }

    out.segs.push_back(trial.seg);
    tau += h;
    u = trial.y1;
    k1 = trial.k_last;
    out.tau_nodes.push_back(tau);
    out.u_nodes.push_back(u);

    if (last || tau >= span) {
      out.term = RawResult::Term::span;
      out.tau_end = tau;
      out.u_end = u;
      return out;
    }
    if (0.5 * u * u >= opt.z_blowup) {
      out.term = RawResult::Term::blowup;
      out.tau_end = tau;
      out.u_end = u;
      return out;
    }
    h = detail::Dp5Stepper<decltype(rhs)>::next_h(h, trial.err);
  }
}

}  // namespace

// ---------------------------------------------------------------------
// KineticCurve

double KineticCurve::reduce(double g) const {
  if (!periodic_) return g;
  double r = std::fmod(g - g_left_, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return g_left_ + r;
}

double KineticCurve::u_dense(double g) const {
  if (pchip_) {
    const double z = std::max((*pchip_)(g), 0.0);
    return params_.epsilon * std::sqrt(2.0 * z);
  }
  if (tail_left_ && std::abs(g - tail_left_->g_saddle) <= tail_left_->band)
    return tail_left_->u(g - tail_left_->g_saddle);
  if (tail_right_ && std::abs(g - tail_right_->g_saddle) <= tail_right_->band)
    return tail_right_->u(g - tail_right_->g_saddle);
  double tau = dir_ * (g - g0_);
  tau = std::clamp(tau, tau_begin_, tau_end_);
  auto it = std::upper_bound(seg_tau_.begin(), seg_tau_.end(), tau);
  std::size_t i = (it == seg_tau_.begin()) ? 0 : (it - seg_tau_.begin() - 1);
  i = std::min(i, segs_.size() - 1);
  return segs_[i].eval(tau);
}

bool KineticCurve::contains(double g) const {
  if (periodic_) return true;
  const double slack = 1e-9 * (1.0 + std::abs(g_right_) + std::abs(g_left_));
  return g >= g_left_ - slack && g <= g_right_ + slack;
}

double KineticCurve::u(double g) const {
  if (!contains(g)) fail("domain_too_short", "g outside curve domain");
  return u_dense(reduce(g));
}

double KineticCurve::z(double g) const {
  const double uu = u(g);
  return 0.5 * uu * uu;
}

double KineticCurve::e(double g) const {
  if (!contains(g)) fail("domain_too_short", "g outside curve domain");
  return z(g) + washboard::potential(g, params_.gamma);
}

double KineticCurve::z_slope(double g) const {
  const double uu = u(g);
  return params_.gamma - std::sin(reduce(g)) - params_.mu * std::abs(uu);
}

std::vector<double> KineticCurve::e_values() const {
  std::vector<double> out(g_grid_.size());
  for (std::size_t i = 0; i < g_grid_.size(); ++i)
    out[i] = z_values_[i] + washboard::potential(g_grid_[i], params_.gamma);
  return out;
}

KineticCurve KineticCurve::from_samples(std::vector<double> g,
                                        std::vector<double> z,
                                        SystemParams params) {
  if (g.size() != z.size() || g.size() < 2)
    fail("grid_mismatch", "need matching g/z samples (>= 2)");
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    if (!(g[i] < g[i + 1]))
      fail("grid_mismatch", "g samples must be strictly increasing");
  for (double zi : z)
    if (zi < 0.0) fail("negative_initial_energy", "z samples must be >= 0");

  KineticCurve c;
  c.params_ = params;
  c.g_grid_ = g;
  c.z_values_ = z;
  c.g_left_ = g.front();
  c.g_right_ = g.back();
  c.g0_ = g.front();
  c.z0_ = z.front();
  c.end_left_ = z.front() == 0.0 ? EndpointKind::zero_crossing
                                 : EndpointKind::truncated;
  c.end_right_ = z.back() == 0.0 ? EndpointKind::zero_crossing
                                 : EndpointKind::truncated;
  c.pchip_ = std::make_shared<const detail::Pchip>(std::move(g), std::move(z));
  return c;
}

KineticCurve integrate_z(double g0, double z0, const SystemParams& params,
                         int direction, double g_max_span,
                         const IntegrateOptions& opt) {
  if (z0 < 0.0) fail("negative_initial_energy", "z0 must be >= 0");
  if (direction != 1 && direction != -1)
    fail("param_out_of_range", "direction must be +1 or -1");
  if (g_max_span <= 0.0) fail("param_out_of_range", "span must be positive");
  params.validate();
  const int dir = direction;
  const int eps = params.epsilon;

  KineticCurve curve;
  curve.params_ = params;
  curve.g0_ = g0;
  curve.z0_ = z0;
  curve.dir_ = dir;

  double tau_start = 0.0;
  double u_start = 0.0;
  std::optional<SaddleTail> launch_tail;

  if (z0 > 0.0) {
    u_start = eps * std::sqrt(2.0 * z0);
  } else {
    const double gs = nearest_saddle(params.gamma, g0);
    const bool at_saddle =
        params.gamma < 1.0 && std::abs(g0 - gs) <= 1e-8;
    if (at_saddle) {
      const auto s = saddle_series(params.mu, params.gamma, dir * eps);
      SaddleTail tail;
      tail.g_saddle = g0;
      tail.u1 = s.u1;
      tail.u2 = s.u2;
      tail.u3 = s.u3;
      tail.band = series_band(s);
      launch_tail = tail;
      tau_start = opt.launch_delta;
      u_start = tail.u(dir * opt.launch_delta);
    } else {
      if (opt.require_separatrix_launch)
        fail("singular_launch_at_non_saddle",
             "z0 = 0 away from a saddle cannot launch a separatrix");
      const double zg = params.gamma - std::sin(g0);
      if (dir * zg <= 0.0)
        fail("param_out_of_range",
             "z0 = 0 start cannot extend in the requested direction");
      tau_start = 1e-10;
      u_start = eps * std::sqrt(2.0 * dir * zg * tau_start);
    }
  }

  RawResult raw =
      integrate_raw(g0, dir, tau_start, u_start, g_max_span, params, opt);

  curve.segs_ = std::move(raw.segs);
  curve.seg_tau_.reserve(curve.segs_.size());
  for (const auto& s : curve.segs_) curve.seg_tau_.push_back(s.t0);
  curve.tau_begin_ = raw.tau_begin;
  curve.tau_end_ = raw.tau_end;

  // endpoint bookkeeping in g-order
  const double g_far = g0 + dir * raw.tau_end;
  EndpointKind far_kind = EndpointKind::truncated;
  double far_g = g_far;
  std::optional<SaddleTail> far_tail;
  curve.z_end_ = 0.5 * raw.u_end * raw.u_end;

  auto attach_far_saddle = [&](double gs) {
    far_kind = EndpointKind::saddle_touch;
    far_g = gs;
    const auto s = saddle_series(params.mu, params.gamma, -dir * eps);
    SaddleTail tail;
    tail.g_saddle = gs;
    tail.u1 = s.u1;
    tail.u2 = s.u2;
    tail.u3 = s.u3;
    tail.band = series_band(s);
    far_tail = tail;
  };

  switch (raw.term) {
    case RawResult::Term::span: {
      curve.termination_ = Termination::span;
      const double gs = nearest_saddle(params.gamma, g_far);
      if (params.gamma < 1.0 && std::abs(g_far - gs) <= opt.saddle_snap &&
          curve.z_end_ <= opt.saddle_touch_z) {
        attach_far_saddle(gs);
      }
      break;
    }
    case RawResult::Term::blowup:
      curve.termination_ = Termination::blowup;
      far_kind = EndpointKind::unbounded;
      break;
    case RawResult::Term::zero: {
      curve.termination_ = Termination::zero;
      const double gs = nearest_saddle(params.gamma, raw.g_stop);
      if (params.gamma < 1.0 && std::abs(raw.g_stop - gs) <= opt.saddle_snap) {
        attach_far_saddle(gs);
      } else {
        far_kind = EndpointKind::zero_crossing;
        far_g = raw.g_stop;
      }
      break;
    }
  }

  EndpointKind near_kind;
  if (launch_tail) {
    near_kind = EndpointKind::saddle_touch;
  } else if (z0 == 0.0) {
    near_kind = EndpointKind::zero_crossing;
  } else {
    near_kind = EndpointKind::truncated;
  }

  if (dir > 0) {
    curve.g_left_ = g0;
    curve.g_right_ = far_g;
    curve.end_left_ = near_kind;
    curve.end_right_ = far_kind;
    curve.tail_left_ = launch_tail;
    curve.tail_right_ = far_tail;
  } else {
    curve.g_left_ = far_g;
    curve.g_right_ = g0;
    curve.end_left_ = far_kind;
    curve.end_right_ = near_kind;
    curve.tail_left_ = far_tail;
    curve.tail_right_ = launch_tail;
  }

  // sampled grid, ascending in g, launch node included
  std::vector<double> gs, zs;
  gs.reserve(raw.tau_nodes.size() + 1);
  zs.reserve(raw.tau_nodes.size() + 1);
  gs.push_back(g0);
  zs.push_back(z0);
  for (std::size_t i = 0; i < raw.tau_nodes.size(); ++i) {
    gs.push_back(g0 + dir * raw.tau_nodes[i]);
    zs.push_back(0.5 * raw.u_nodes[i] * raw.u_nodes[i]);
  }
  if (dir < 0) {
    std::reverse(gs.begin(), gs.end());
    std::reverse(zs.begin(), zs.end());
  }
  curve.g_grid_ = std::move(gs);
  curve.z_values_ = std::move(zs);
  return curve;
}

KineticCurve clamp_endpoint_to_saddle(const KineticCurve& curve, int side,
                                      double g_saddle) {
  KineticCurve c = curve;
  const auto s = saddle_series(c.params_.mu, c.params_.gamma,
                               (side > 0 ? -1 : +1) * c.params_.epsilon);
  SaddleTail tail;
  tail.g_saddle = g_saddle;
  tail.u1 = s.u1;
  tail.u2 = s.u2;
  tail.u3 = s.u3;
  tail.band = series_band(s);
  const double edge = (side > 0) ? c.g_right_ : c.g_left_;
  const double gap = std::abs(edge - g_saddle);
  if (gap > 0.5 * tail.band)
    fail("bracket_failure",
         "curve endpoint too far from the saddle to clamp");
  if (side > 0) {
    c.g_right_ = g_saddle;
    c.end_right_ = EndpointKind::saddle_touch;
    c.tail_right_ = tail;
    if (!c.g_grid_.empty() && c.g_grid_.back() > g_saddle) {
      c.g_grid_.back() = g_saddle;
      c.z_values_.back() = 0.0;
    }
  } else {
    c.g_left_ = g_saddle;
    c.end_left_ = EndpointKind::saddle_touch;
    c.tail_left_ = tail;
    if (!c.g_grid_.empty() && c.g_grid_.front() < g_saddle) {
      c.g_grid_.front() = g_saddle;
      c.z_values_.front() = 0.0;
    }
  }
  return c;
}

KineticCurve periodic_extension(const KineticCurve& curve, double residual) {
  if (std::abs((curve.g_right_ - curve.g_left_) - kTwoPi) > 1e-6)
    fail("domain_too_short", "periodic extension needs a one-period curve");
  KineticCurve c = curve;
  c.periodic_ = true;
  c.periodicity_residual_ = residual;
  return c;
}

// ---------------------------------------------------------------------
// functionals

namespace {

double cumulative_speed_integral(const KineticCurve& curve, double a, double b,
                                 double rtol) {
  // integral of sqrt(2 z) = |u|
  auto f = [&](double s) { return std::abs(curve.u(s)); };
  return detail::adaptive_gk(f, a, b, rtol, 1e-15, 48);
}

}  // namespace

double volterra_residual(const KineticCurve& curve) {
  const auto& g = curve.g_grid();
  const auto& z = curve.z_values();
  const double g0 = curve.g0();
  const double z0 = curve.z0();
  const auto& P = curve.params();
  const double U0 = washboard::potential(g0, P.gamma);

  // cumulative speed integral along the grid
  std::vector<double> C(g.size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i)
    C[i] = C[i - 1] + cumulative_speed_integral(curve, g[i - 1], g[i], 1e-12);
  // offset so that the integral is measured from g0
  std::size_t i0 = 0;
  double best = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = std::abs(g[i] - g0);
    if (d < best) {
      best = d;
      i0 = i;
    }
  }
  double max_res = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double integral = C[i] - C[i0];
    const double res = z[i] - z0 - U0 + washboard::potential(g[i], P.gamma) +
                       P.epsilon * P.mu * integral;
    max_res = std::max(max_res, std::abs(res));
  }
  return max_res;
}

double loop_integral(const KineticCurve& curve, double g) {
  if (!curve.periodic() &&
      !(curve.contains(g) && curve.contains(g + kTwoPi)))
    fail("domain_too_short", "[g, g+2pi] not contained in the curve domain");
  return cumulative_speed_integral(curve, g, g + kTwoPi, 1e-12);
}

std::vector<StepRelationResidual> step_relation_check(const KineticCurve& curve,
                                                      double g0) {
  std::vector<StepRelationResidual> out;
  const auto& P = curve.params();
  int k_lo = 0, k_hi = 0;
  if (curve.periodic()) {
    k_lo = 0;
    k_hi = 2;
  } else {
    k_lo = static_cast<int>(std::ceil((curve.g_left() - g0) / kTwoPi - 1e-12));
    k_hi = static_cast<int>(
        std::floor((curve.g_right() - g0) / kTwoPi + 1e-12) - 1);
  }
  if (k_hi < k_lo)
    fail("domain_too_short", "domain spans less than two periods from g0");
  for (int k = k_lo; k <= k_hi; ++k) {
    const double gk = g0 + kTwoPi * k;
    StepRelationResidual r;
    r.k = k;
    r.dz = curve.z(gk + kTwoPi) - curve.z(gk);
    r.loop = loop_integral(curve, gk);
    r.residual = r.dz - (kTwoPi * P.gamma - P.epsilon * P.mu * r.loop);
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------
// WaveProfile

std::size_t WaveProfile::locate(double xi) const {
  auto cmp = [](const ProfileNode& n, double v) { return n.xi < v; };
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), xi, cmp);
  std::size_t i = (it == nodes_.begin()) ? 0 : (it - nodes_.begin() - 1);
  return std::min(i, nodes_.size() - 2);
}

double WaveProfile::reduce(double xi, double& g_shift) const {
  g_shift = 0.0;
  if (extension_ != Extension::linear_periodic) return xi;
  const double xi0 = nodes_.front().xi;
  const double span_g = nodes_.back().g - nodes_.front().g;
  const double k = std::floor((xi - xi0) / Xi_);
  g_shift = k * span_g;
  return xi - k * Xi_;
}

bool WaveProfile::covers(double xi) const {
  switch (extension_) {
    case Extension::linear_periodic:
      return true;
    case Extension::tails: {
      if (xi < xi_min() && !tail_lo_) return false;
      if (xi > xi_max() && !tail_hi_) return false;
      return true;
    }
    case Extension::none:
    default:
      return xi >= xi_min() - 1e-12 && xi <= xi_max() + 1e-12;
  }
}

double WaveProfile::g(double xi) const {
  if (!covers(xi)) fail("out_of_profile_range", "xi outside covered range");
  double shift = 0.0;
  const double x = reduce(xi, shift);
  if (tail_lo_ && x < nodes_.front().xi) {
    const auto& t = *tail_lo_;
    return shift + t.g_limit + t.eta_cut * std::exp(t.u1 * (x - t.xi_cut));
  }
  if (tail_hi_ && x > nodes_.back().xi) {
    const auto& t = *tail_hi_;
    return shift + t.g_limit + t.eta_cut * std::exp(t.u1 * (x - t.xi_cut));
  }
  const std::size_t i = locate(std::clamp(x, xi_min(), xi_max()));
  const auto& a = nodes_[i];
  const auto& b = nodes_[i + 1];
  return shift + detail::Quintic::value(x, a.xi, b.xi - a.xi, a.g, a.u, a.du,
                                        b.g, b.u, b.du);
}

double WaveProfile::u(double xi) const {
  if (!covers(xi)) fail("out_of_profile_range", "xi outside covered range");
  double shift = 0.0;
  const double x = reduce(xi, shift);
  auto tail_u = [](const Tail& t, double x) {
    const double eta = t.eta_cut * std::exp(t.u1 * (x - t.xi_cut));
    return eta * (t.u1 + eta * (t.u2 + eta * t.u3));
  };
  if (tail_lo_ && x < nodes_.front().xi) return tail_u(*tail_lo_, x);
  if (tail_hi_ && x > nodes_.back().xi) return tail_u(*tail_hi_, x);
  const std::size_t i = locate(std::clamp(x, xi_min(), xi_max()));
  const auto& a = nodes_[i];
  const auto& b = nodes_[i + 1];
  return detail::Quintic::deriv1(x, a.xi, b.xi - a.xi, a.g, a.u, a.du, b.g,
                                 b.u, b.du);
}

double WaveProfile::g_second(double xi) const {
  if (!covers(xi)) fail("out_of_profile_range", "xi outside covered range");
  double shift = 0.0;
  const double x = reduce(xi, shift);
  auto tail_gpp = [](const Tail& t, double x) {
    const double eta = t.eta_cut * std::exp(t.u1 * (x - t.xi_cut));
    const double u = eta * (t.u1 + eta * (t.u2 + eta * t.u3));
    const double ug = t.u1 + eta * (2.0 * t.u2 + 3.0 * t.u3 * eta);
    return ug * u;
  };
  if (tail_lo_ && x < nodes_.front().xi) return tail_gpp(*tail_lo_, x);
  if (tail_hi_ && x > nodes_.back().xi) return tail_gpp(*tail_hi_, x);
  const std::size_t i = locate(std::clamp(x, xi_min(), xi_max()));
  const auto& a = nodes_[i];
  const auto& b = nodes_[i + 1];
  return detail::Quintic::deriv2(x, a.xi, b.xi - a.xi, a.g, a.u, a.du, b.g,
                                 b.u, b.du);
}

WaveProfile profile_from_nodes(std::vector<ProfileNode> nodes,
                               WaveProfile::Extension ext, double Xi,
                               std::optional<WaveProfile::Tail> tail_lo,
                               std::optional<WaveProfile::Tail> tail_hi) {
  WaveProfile p;
  p.nodes_ = std::move(nodes);
  p.extension_ = ext;
  p.Xi_ = Xi;
  p.tail_lo_ = std::move(tail_lo);
  p.tail_hi_ = std::move(tail_hi);
  return p;
}

WaveProfile quadrature_xi(const KineticCurve& curve, double g_anchor,
                          double xi_anchor, const QuadratureOptions& opt) {
  const auto& P = curve.params();
  const int eps = P.epsilon;

  // covered g-window: saddle-touch endpoints are cut at reach_tol
  double gL = curve.g_left();
  double gR = curve.g_right();
  bool cut_left = false, cut_right = false;
  if (!curve.periodic()) {
    if (curve.endpoint_left() == EndpointKind::saddle_touch) {
      gL += opt.reach_tol;
      cut_left = true;
    }
    if (curve.endpoint_right() == EndpointKind::saddle_touch) {
      gR -= opt.reach_tol;
      cut_right = true;
    }
  }
  if (!(g_anchor >= gL - 1e-12 && g_anchor <= gR + 1e-12) && !curve.periodic())
    fail("param_out_of_range", "anchor outside curve domain");

  // interior zeros are not representable by a single monotone piece
  {
    const auto& gg = curve.g_grid();
    const auto& zz = curve.z_values();
    for (std::size_t i = 1; i + 1 < gg.size(); ++i)
      if (zz[i] <= 0.0 && gg[i] > gL && gg[i] < gR)
        fail("zero_energy_in_interior", "z vanishes inside the domain");
  }

  // node positions: curve grid clipped to the window, plus refinements
  std::vector<double> gs;
  gs.push_back(gL);
  for (double g : curve.g_grid())
    if (g > gL + 1e-14 && g < gR - 1e-14) gs.push_back(g);
  gs.push_back(gR);
  if (!curve.periodic()) {
    gs.push_back(std::clamp(g_anchor, gL, gR));
    std::sort(gs.begin(), gs.end());
    gs.erase(std::unique(gs.begin(), gs.end(),
                         [](double a, double b) { return b - a < 1e-13; }),
             gs.end());
  }

  auto speed = [&](double g) { return std::abs(curve.u(g)); };

  // refine until each gap is at most ~max_dxi of 'time'
  std::vector<double> refined;
  refined.push_back(gs.front());
  for (std::size_t i = 1; i < gs.size(); ++i) {
    std::vector<double> stack{gs[i]};
    while (!stack.empty()) {
      const double b = stack.back();
      const double a = refined.back();
      const double m = 0.5 * (a + b);
      const double umin =
          std::max(std::min({speed(a), speed(m), speed(b)}), 1e-300);
      if ((b - a) / umin > opt.max_dxi && b - a > 1e-12 &&
          refined.size() + stack.size() < 400000) {
        stack.push_back(m);
      } else {
        refined.push_back(b);
        stack.pop_back();
      }
    }
  }

  // cumulative 'time' xi along the nodes
  std::vector<double> xis(refined.size(), 0.0);
  for (std::size_t i = 1; i < refined.size(); ++i) {
    auto f = [&](double s) { return 1.0 / std::max(speed(s), 1e-300); };
    xis[i] = xis[i - 1] + detail::adaptive_gk(f, refined[i - 1], refined[i],
                                              opt.quad_rtol, 1e-16, 48);
  }
  // anchor offset (interpolate xi at g_anchor linearly between nodes --
  // the anchor is one of the nodes for aperiodic curves)
  double xi_at_anchor = 0.0;
  {
    auto it = std::lower_bound(refined.begin(), refined.end(),
                               std::clamp(g_anchor, gL, gR));
    std::size_t i =
        std::min<std::size_t>(it - refined.begin(), refined.size() - 1);
    if (std::abs(refined[i] - g_anchor) > 1e-10 && i > 0) {
      auto f = [&](double s) { return 1.0 / std::max(speed(s), 1e-300); };
      xi_at_anchor = xis[i] - detail::adaptive_gk(f, g_anchor, refined[i],
                                                  opt.quad_rtol, 1e-16, 48);
    } else {
      xi_at_anchor = xis[i];
    }
  }

  std::vector<ProfileNode> nodes(refined.size());
  for (std::size_t i = 0; i < refined.size(); ++i) {
    const double g = refined[i];
    const double u = curve.u(g);
    nodes[i].g = g;
    nodes[i].u = u;
    nodes[i].du = P.gamma - std::sin(g) - P.mu * u;
    nodes[i].xi = xi_anchor + eps * (xis[i] - xi_at_anchor);
  }
  if (eps < 0) std::reverse(nodes.begin(), nodes.end());

  WaveProfile prof;
  prof.nodes_ = std::move(nodes);

  if (curve.periodic()) {
    prof.extension_ = WaveProfile::Extension::linear_periodic;
    prof.Xi_ = xis.back() - xis.front();
    return prof;
  }

  const bool lo_is_left = eps > 0;
  auto make_tail = [&](bool left_side) {
    WaveProfile::Tail t;
    const auto& st = left_side ? curve.tail_left() : curve.tail_right();
    t.g_limit = st->g_saddle;
    t.u1 = st->u1;
    t.u2 = st->u2;
    t.u3 = st->u3;
    const auto& node = (left_side == lo_is_left) ? prof.nodes_.front()
                                                 : prof.nodes_.back();
    t.xi_cut = node.xi;
    t.eta_cut = node.g - st->g_saddle;
    return t;
  };
  if (cut_left) {
    if (lo_is_left)
      prof.tail_lo_ = make_tail(true);
    else
      prof.tail_hi_ = make_tail(true);
  }
  if (cut_right) {
    if (lo_is_left)
      prof.tail_hi_ = make_tail(false);
    else
      prof.tail_lo_ = make_tail(false);
  }
  if (prof.tail_lo_ || prof.tail_hi_)
    prof.extension_ = WaveProfile::Extension::tails;
  return prof;
}

}  // namespace sgtw::phaseflow
