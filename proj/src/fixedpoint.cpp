#include "sgtw/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgtw/errors.hpp"

namespace sgtw::fixedpoint {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double omega(double y, double gamma) {
  const double s = std::sin(0.5 * y);
  return std::sqrt(1.0 - gamma * gamma) * 2.0 * s * s +
         gamma * (y - std::sin(y));
}

// Cumulative integral of w on the uniform grid, locally fourth order:
// Simpson over even pairs, quadratic end rule for the odd nodes.
std::vector<double> cumulative(const std::vector<double>& w, double h) {
  const std::size_t n = w.size();
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 2; i < n; i += 2)
    c[i] = c[i - 2] + h / 3.0 * (w[i - 2] + 4.0 * w[i - 1] + w[i]);
  for (std::size_t i = 1; i < n; i += 2) {
    if (i + 1 < n)
      c[i] = c[i - 1] + h / 12.0 * (5.0 * w[i - 1] + 8.0 * w[i] - w[i + 1]);
    else
      c[i] = c[i - 1] + h / 12.0 * (-w[i - 2] + 8.0 * w[i - 1] + 5.0 * w[i]);
  }
  return c;
}

}  // namespace

WeightedGridFunction::WeightedGridFunction(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.size() < 5 || values_.size() % 2 == 0)
    fail("grid_mismatch", "need an even interval count (odd node count >= 5)");
}

double WeightedGridFunction::y_at(std::size_t i, std::size_t n) {
  return kTwoPi * static_cast<double>(i) / static_cast<double>(n);
}

double WeightedGridFunction::h() const { return kTwoPi / n_intervals(); }

WeightedGridFunction WeightedGridFunction::seed(std::size_t n) {
  return sample(n, [](double y) {
    const double s = std::sin(0.5 * y);
    return 2.0 * s * s;
  });
}

double WeightedGridFunction::ratio(std::size_t i) const {
  const std::size_t n = n_intervals();
  auto interior = [&](std::size_t j) {
    const double p = weight(y(j));
    return 2.0 * values_[j] / (p * p);
  };
  if (i == 0) {
    const double r1 = interior(1), r2 = interior(2), r3 = interior(3);
    return 3.0 * r1 - 3.0 * r2 + r3;
  }
  if (i == n) {
    const double r1 = interior(n - 1), r2 = interior(n - 2),
                 r3 = interior(n - 3);
    return 3.0 * r1 - 3.0 * r2 + r3;
  }
  return interior(i);
}

double WeightedGridFunction::ratio_min() const {
  double m = ratio(0);
  for (std::size_t i = 1; i <= n_intervals(); ++i) m = std::min(m, ratio(i));
  return m;
}

double WeightedGridFunction::ratio_max() const {
  double m = ratio(0);
  for (std::size_t i = 1; i <= n_intervals(); ++i) m = std::max(m, ratio(i));
  return m;
}

double weight(double y) { return std::sin(0.5 * y); }

double weight_primitive(double y) { return 2.0 * (1.0 - std::cos(0.5 * y)); }

double weighted_distance(const WeightedGridFunction& z1,
                         const WeightedGridFunction& z2) {
  if (z1.n_intervals() != z2.n_intervals())
    fail("grid_mismatch", "weighted distance needs a common grid");
  const std::size_t n = z1.n_intervals();
  auto interior = [&](std::size_t j) {
    const double p = weight(z1.y(j));
    return 2.0 * (z1[j] - z2[j]) / (p * p);
  };
  double m = 0.0;
  for (std::size_t j = 1; j < n; ++j) m = std::max(m, std::abs(interior(j)));
  const double r_lo = 3.0 * interior(1) - 3.0 * interior(2) + interior(3);
  const double r_hi =
      3.0 * interior(n - 1) - 3.0 * interior(n - 2) + interior(n - 3);
  m = std::max({m, std::abs(r_lo), std::abs(r_hi)});
  return m;
}

OperatorResult apply_operator(const WeightedGridFunction& z, double gamma) {
  if (gamma < 0.0) fail("param_out_of_range", "gamma must be >= 0");
  const std::size_t n = z.n_intervals();
  std::vector<double> w(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    w[i] = std::sqrt(2.0 * std::max(z[i], 0.0));
  const auto S = cumulative(w, z.h());
  if (S.back() < 1e-14)
    fail("degenerate_iterate", "integral of sqrt(2z) vanished");
  const double mu_tilde = kTwoPi * gamma / S.back();

  std::vector<double> next(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    next[i] = omega(z.y(i), gamma) - mu_tilde * S[i];
  next[0] = 0.0;
  OperatorResult out;
  out.z_next = WeightedGridFunction(std::move(next));
  out.mu_tilde = mu_tilde;
  return out;
}

WeightedGridFunction apply_classical_operator(const WeightedGridFunction& z,
                                              double gamma, double mu,
                                              double z0) {
  const std::size_t n = z.n_intervals();
  std::vector<double> w(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    w[i] = std::sqrt(2.0 * std::max(z[i], 0.0));
  const auto S = cumulative(w, z.h());
  std::vector<double> next(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    next[i] = z0 + omega(z.y(i), gamma) - mu * S[i];
  return WeightedGridFunction(std::move(next));
}

ContractionConstants contraction_constants(double gamma) {
  if (gamma < 0.0) fail("param_out_of_range", "gamma must be >= 0");
  ContractionConstants c;
  c.gamma_box_max = 1.0 / std::sqrt(1.0 + 25.0 * kPi * kPi / 9.0);
  c.gamma_contraction_max =
      1.0 / std::sqrt(1.0 + std::pow(7.0 * kPi / 4.0, 2));
  const double s = gamma < 1.0 ? std::sqrt(1.0 - gamma * gamma) : 0.0;
  const double a2 = 4.0 * (s - gamma * kPi);
  const double b2 = 4.0 * (s + gamma * kPi);
  c.b = std::sqrt(std::max(b2, 0.0));
  if (a2 > 0.0) {
    c.a = std::sqrt(a2);
    c.lambda = (1.0 + c.b / c.a) * kPi * gamma / a2;
    c.box_valid = (c.a / c.b >= 0.5);
  } else {
    c.a = 0.0;
    c.lambda = std::numeric_limits<double>::infinity();
    c.box_valid = false;
  }
  c.contraction_valid =
      c.box_valid && c.lambda < 1.0 && gamma < c.gamma_contraction_max;
  return c;
}

FixedPointRun iterate_to_fixed_point(double gamma, double tol,
                                     std::size_t max_iter, bool force,
                                     std::size_t n_intervals) {
  if (gamma < 0.0) fail("param_out_of_range", "gamma must be >= 0");
  const auto cc = contraction_constants(gamma);
  if (!cc.contraction_valid && !force)
    fail("not_contractive",
         "gamma outside the proven contraction range; pass force to try");

  FixedPointRun run;
  run.gamma = gamma;
  run.a = cc.a;
  run.b = cc.b;
  run.lambda = cc.lambda;
  run.forced = !cc.contraction_valid;

  // a-posteriori stopping factor; heuristic 1 outside the proven range
  const double factor = (cc.lambda < 1.0 && cc.lambda > 0.0)
                            ? cc.lambda / (1.0 - cc.lambda)
                            : 1.0;

  run.iterates.push_back(WeightedGridFunction::seed(n_intervals));
  const double err_mu_coeff =
      gamma > 0.0 && run.a > 0.0
          ? kPi * gamma / 32.0 *
                std::pow(std::sqrt(1.0 - gamma * gamma) - gamma * kPi, -1.5)
          : 0.0;

  for (std::size_t it = 1; it <= max_iter; ++it) {
    auto step = apply_operator(run.iterates.back(), gamma);
    run.mu_sequence.push_back(step.mu_tilde);
    if (force) {  // keep the iterate admissible outside the proven box
      std::vector<double> v = step.z_next.values();
      for (double& x : v) x = std::max(x, 0.0);
      step.z_next = WeightedGridFunction(std::move(v));
    }
    const double inc =
        weighted_distance(step.z_next, run.iterates.back());
    run.iterates.push_back(std::move(step.z_next));
    run.iterations = it;
    if (it == 1)
      run.first_increment = inc;
    else if (run.last_increment > 1e-9)  // ratios only above round-off
      run.max_ratio = std::max(run.max_ratio, inc / run.last_increment);
    run.last_increment = inc;

    if (inc * factor <= tol) {
      run.converged = true;
      break;
    }
  }
  if (!run.converged && run.last_increment * factor > tol)
    fail("max_iter_exceeded", "fixed-point iteration did not converge");

  // report mu~ of the final iterate together with the a-priori bounds
  {
    const std::size_t n = run.iterations;
    auto final_step = apply_operator(run.iterates.back(), gamma);
    run.mu_hat = final_step.mu_tilde;
    run.mu_sequence.push_back(run.mu_hat);
    if (cc.lambda < 1.0) {
      const double pow_l = std::pow(cc.lambda, static_cast<double>(n));
      run.apriori_error_z =
          pow_l / (1.0 - cc.lambda) * run.first_increment;
      run.apriori_error_mu = err_mu_coeff * run.apriori_error_z;
    }
  }
  return run;
}

double first_z1(double y, double gamma) {
  const double s = std::sin(0.5 * y);
  return std::sqrt(1.0 - gamma * gamma) * 2.0 * s * s +
         gamma * (kPi * (std::cos(0.5 * y) - 1.0) + y - std::sin(y));
}

double first_mu1(double gamma) { return 0.25 * kPi * gamma; }

double first_e1(double y, double gamma) {
  // constant fixed by the total energy at the launch saddle
  const double g0 = -std::asin(gamma) - kPi;
  const double U0 = -(std::cos(g0) + gamma * g0);
  return gamma * kPi * (std::cos(0.5 * y) - 1.0) + U0;
}

double first_v1(double gamma, double alpha) {
  if (gamma == 0.0) return 0.0;  // continuity convention
  const double r = 4.0 * alpha / (kPi * gamma);
  return 1.0 / std::sqrt(1.0 + r * r);
}

TricomiReport tricomi_condition(const WeightedGridFunction& z0,
                                const WeightedGridFunction& z1, double mu) {
  if (z0.n_intervals() != z1.n_intervals())
    fail("grid_mismatch", "condition needs a common grid");
  TricomiReport rep;
  for (std::size_t i = 0; i <= z0.n_intervals(); ++i)
    rep.eps1 = std::max(rep.eps1, std::abs(z1[i] - z0[i]));
  rep.eta1 = std::abs(z1[0]);
  for (std::size_t i = 1; i <= z1.n_intervals(); ++i)
    rep.eta1 = std::min(rep.eta1, std::abs(z1[i]));
  const double d = std::sqrt(rep.eta1) - std::sqrt(rep.eps1);
  rep.mu_bound = d * d / (kTwoPi * std::sqrt(2.0));
  rep.holds = rep.eta1 > rep.eps1 && mu < rep.mu_bound;
  return rep;
}

}  // namespace sgtw::fixedpoint
