#ifndef SGTW_FIXEDPOINT_HPP
#define SGTW_FIXEDPOINT_HPP

#include <cstddef>
#include <vector>

namespace sgtw::fixedpoint {

// Nonnegative grid function on a uniform y-grid over [0, 2*pi] with
// quadratic vanishing at both ends, measured against the fixed weight
// p(y) = sin(y/2):   ||z|| = sup |2 z(y) / p^2(y)|.
class WeightedGridFunction {
 public:
  WeightedGridFunction() = default;
  explicit WeightedGridFunction(std::vector<double> values);

  static WeightedGridFunction seed(std::size_t n_intervals);  // 2 sin^2(y/2)
  template <class F>
  static WeightedGridFunction sample(std::size_t n_intervals, F&& f) {
    std::vector<double> v(n_intervals + 1);
    for (std::size_t i = 0; i <= n_intervals; ++i) v[i] = f(y_at(i, n_intervals));
    return WeightedGridFunction(std::move(v));
  }

  std::size_t n_intervals() const { return values_.size() - 1; }
  double h() const;
  double y(std::size_t i) const { return y_at(i, n_intervals()); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // 2 z / p^2 at node i; the 0/0 endpoint values come from one-sided
  // quadratic extrapolation of the interior ratios.
  double ratio(std::size_t i) const;
  double ratio_min() const;
  double ratio_max() const;

 private:
  static double y_at(std::size_t i, std::size_t n);
  std::vector<double> values_;
};

double weight(double y);           // p = sin(y/2)
double weight_primitive(double y); // P = 2 (1 - cos(y/2))

// sup |2 (z1 - z2) / p^2|
double weighted_distance(const WeightedGridFunction& z1,
                         const WeightedGridFunction& z2);

struct OperatorResult {
  WeightedGridFunction z_next;
  double mu_tilde = 0.0;
};

// One application of the balance-adjusted integral operator
//   (A z)(y) = omega(y) - mu~(z) Int_0^y sqrt(2 z),
//   mu~(z)   = 2 pi gamma / Int_0^{2pi} sqrt(2 z),
// with omega(y) = sqrt(1-gamma^2) 2 sin^2(y/2) + gamma (y - sin y).
OperatorResult apply_operator(const WeightedGridFunction& z, double gamma);

// The classical scheme: mu is held fixed and the orbit starts from
// z(0) = z0 instead of the balance adjustment.
WeightedGridFunction apply_classical_operator(const WeightedGridFunction& z,
                                              double gamma, double mu,
                                              double z0);

struct ContractionConstants {
  double a = 0.0, b = 0.0, lambda = 0.0;
  bool box_valid = false;         // a^2 > 0 and a/b >= 1/2
  bool contraction_valid = false; // lambda < 1 within the proven range
  double gamma_box_max = 0.0;         // [1 + 25 pi^2/9]^{-1/2}
  double gamma_contraction_max = 0.0; // [1 + (7 pi/4)^2]^{-1/2}
};

// a^2 = 4 (sqrt(1-g^2) - g pi), b^2 = 4 (sqrt(1-g^2) + g pi),
// lambda = (1 + b/a) pi gamma / a^2.
ContractionConstants contraction_constants(double gamma);

struct FixedPointRun {
  double gamma = 0.0;
  std::vector<WeightedGridFunction> iterates;  // z_(0), z_(1), ...
  std::vector<double> mu_sequence;             // mu_n = mu~(z_(n-1))
  double a = 0.0, b = 0.0, lambda = 0.0;
  double mu_hat = 0.0;              // mu~(z_(n)) at exit
  double apriori_error_z = 0.0;     // lambda^n/(1-lambda) ||z1 - z0||
  double apriori_error_mu = 0.0;
  double first_increment = 0.0;     // ||z1 - z0||
  double last_increment = 0.0;
  double max_ratio = 0.0;           // observed contraction ratio
  bool converged = false;
  bool forced = false;
  std::size_t iterations = 0;
};

// Successive approximations from z_(0) = 2 sin^2(y/2); stops once the
// a-posteriori bound ||z_n - z_{n-1}|| lambda/(1-lambda) falls below tol.
// Outside the proven contraction range the iteration refuses unless
// force is set, in which case convergence is attempted heuristically.
FixedPointRun iterate_to_fixed_point(double gamma, double tol = 1e-12,
                                     std::size_t max_iter = 200,
                                     bool force = false,
                                     std::size_t n_intervals = 2048);

// Closed forms of the first approximation.
double first_z1(double y, double gamma);
double first_mu1(double gamma);                 // pi gamma / 4
double first_e1(double y, double gamma);        // anchored at the launch saddle
double first_v1(double gamma, double alpha);    // [1 + (4a/(pi g))^2]^{-1/2}

struct TricomiReport {
  bool holds = false;
  double eps1 = 0.0;      // max |z1 - z0|
  double eta1 = 0.0;      // min |z1|
  double mu_bound = 0.0;  // (sqrt(eta1) - sqrt(eps1))^2 / (2 pi sqrt 2)
};

// Classical sup-norm convergence condition for the fixed-mu scheme.
TricomiReport tricomi_condition(const WeightedGridFunction& z0,
                                const WeightedGridFunction& z1, double mu);

}  // namespace sgtw::fixedpoint

#endif
