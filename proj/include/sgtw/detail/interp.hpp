#ifndef SGTW_DETAIL_INTERP_HPP
#define SGTW_DETAIL_INTERP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace sgtw::detail {

// Shape-preserving cubic (Fritsch-Carlson).  Values stay within the range
// of the data on every monotone piece, so nonnegative data interpolates
// to a nonnegative function.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    d_.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      s[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    if (n == 2) {
      d_[0] = d_[1] = s[0];
      return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (s[i - 1] * s[i] <= 0.0) {
        d_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
      }
    }
    d_[0] = end_slope(h[0], h[1], s[0], s[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
  }

  double operator()(double x) const {
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] +
           h11 * h * d_[i + 1];
  }

  double derivative(double x) const {
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double g00 = (6 * t2 - 6 * t) / h, g10 = 3 * t2 - 4 * t + 1;
    const double g01 = (-6 * t2 + 6 * t) / h, g11 = 3 * t2 - 2 * t;
    return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
  }

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }

 private:
  std::size_t locate(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : (it - x_.begin() - 1);
    return std::min(i, x_.size() - 2);
  }

  static double end_slope(double h0, double h1, double s0, double s1) {
    double d = ((2 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d * s0 <= 0.0) return 0.0;
    if (s0 * s1 < 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
    return d;
  }

  std::vector<double> x_, y_, d_;
};

// Two-point quintic Hermite on [x0, x1] from values and first/second
// derivatives at both ends.
struct Quintic {
  static double value(double x, double x0, double h, double f0, double d0,
                      double s0, double f1, double d1, double s1) {
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double h10 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double h20 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
    const double h01 = 10 * t3 - 15 * t4 + 6 * t5;
    const double h11 = -4 * t3 + 7 * t4 - 3 * t5;
    const double h21 = 0.5 * (t3 - 2 * t4 + t5);
    return f0 * h00 + h * d0 * h10 + h * h * s0 * h20 + f1 * h01 +
           h * d1 * h11 + h * h * s1 * h21;
  }

  static double deriv1(double x, double x0, double h, double f0, double d0,
                       double s0, double f1, double d1, double s1) {
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const double g00 = -30 * t2 + 60 * t3 - 30 * t4;
    const double g10 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double g20 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
    const double g01 = 30 * t2 - 60 * t3 + 30 * t4;
    const double g11 = -12 * t2 + 28 * t3 - 15 * t4;
    const double g21 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
    return (f0 * g00 + h * d0 * g10 + h * h * s0 * g20 + f1 * g01 +
            h * d1 * g11 + h * h * s1 * g21) /
           h;
  }

  static double deriv2(double x, double x0, double h, double f0, double d0,
                       double s0, double f1, double d1, double s1) {
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double q00 = -60 * t + 180 * t2 - 120 * t3;
    const double q10 = -36 * t + 96 * t2 - 60 * t3;
    const double q20 = 1 - 9 * t + 18 * t2 - 10 * t3;
    const double q01 = 60 * t - 180 * t2 + 120 * t3;
    const double q11 = -24 * t + 84 * t2 - 60 * t3;
    const double q21 = 3 * t - 12 * t2 + 10 * t3;
    return (f0 * q00 + h * d0 * q10 + h * h * s0 * q20 + f1 * q01 +
            h * d1 * q11 + h * h * s1 * q21) /
           (h * h);
  }
};

}  // namespace sgtw::detail

#endif
