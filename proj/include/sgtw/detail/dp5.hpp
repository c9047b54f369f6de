#ifndef SGTW_DETAIL_DP5_HPP
#define SGTW_DETAIL_DP5_HPP

#include <algorithm>
#include <cmath>

namespace sgtw::detail {

// One accepted Dormand-Prince 5(4) step together with its quartic
// dense-output coefficients (Hairer's contd5 layout).
struct Dp5Segment {
  double t0 = 0.0;
  double h = 0.0;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0, r5 = 0.0;

  double eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
  }
  double t_end() const { return t0 + h; }
};

// Scalar Dormand-Prince 5(4) with FSAL and dense output.  The caller
// drives the step loop; this class performs one trial step.
template <class F>
class Dp5Stepper {
 public:
  Dp5Stepper(F f, double rtol, double atol)
      : f_(std::move(f)), rtol_(rtol), atol_(atol) {}

  struct Trial {
    double y1 = 0.0;      // 5th-order solution at t+h
    double k_last = 0.0;  // f(t+h, y1), reusable as next k1
    double err = 0.0;     // scaled error estimate (accept when <= 1)
    Dp5Segment seg;
  };

  Trial attempt(double t, double y, double h, double k1) const {
    const double k2 = f_(t + c2 * h, y + h * (a21 * k1));
    const double k3 = f_(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const double k4 = f_(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 =
        f_(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = f_(
        t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y1 =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f_(t + h, y1);

    const double errv =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double sc = atol_ + rtol_ * std::max(std::abs(y), std::abs(y1));

    Trial out;
    out.y1 = y1;
    out.k_last = k7;
    out.err = std::abs(errv) / sc;

    const double ydiff = y1 - y;
    const double bspl = h * k1 - ydiff;
    out.seg.t0 = t;
    out.seg.h = h;
    out.seg.r1 = y;
    out.seg.r2 = ydiff;
    out.seg.r3 = bspl;
    out.seg.r4 = ydiff - h * k7 - bspl;
    out.seg.r5 =
        h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    return out;
  }

  double rhs(double t, double y) const { return f_(t, y); }

  // Classic step-size update for order 5.
  static double next_h(double h, double err) {
    const double fac =
        std::clamp(0.9 * std::pow(std::max(err, 1e-30), -0.2), 0.2, 5.0);
    return h * fac;
  }

 private:
  F f_;
  double rtol_, atol_;

  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                          c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0,
                          a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                          a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                          a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0,
                          b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                          b6 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                          e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                          e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  static constexpr double d1 = -12715105075.0 / 11282082432.0;
  static constexpr double d3 = 87487479700.0 / 32700410799.0;
  static constexpr double d4 = -10690763975.0 / 1880347072.0;
  static constexpr double d5 = 701980252875.0 / 199316789632.0;
  static constexpr double d6 = -1453857185.0 / 822651844.0;
  static constexpr double d7 = 69997945.0 / 29380423.0;
};

}  // namespace sgtw::detail

#endif
