#ifndef SGTW_DETAIL_QUADRATURE_HPP
#define SGTW_DETAIL_QUADRATURE_HPP

#include <cmath>
#include <cstddef>

namespace sgtw::detail {

// Gauss-Kronrod 15(7) pair on [-1, 1] (QUADPACK abscissae/weights).
inline constexpr double gk_x[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double gk_wk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
    0.2044329400752989,  0.2094821410847278};
inline constexpr double gk_wg[4] = {0.1294849661688697, 0.2797053914892767,
                                    0.3818300505051189, 0.4179591836734694};

template <class F>
struct GkResult {
  double value;
  double error;
};

template <class F>
inline void gk15(const F& f, double a, double b, double& value,
                 double& error) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - hw * gk_x[i]);
    fv[14 - i] = f(c + hw * gk_x[i]);
  }
  fv[7] = f(c);
  double k = 0.0, g = 0.0;
  for (int i = 0; i < 7; ++i) k += gk_wk[i] * (fv[i] + fv[14 - i]);
  k += gk_wk[7] * fv[7];
  // Gauss nodes are the odd-index Kronrod abscissae.
  g = gk_wg[0] * (fv[1] + fv[13]) + gk_wg[1] * (fv[3] + fv[11]) +
      gk_wg[2] * (fv[5] + fv[9]) + gk_wg[3] * fv[7];
  value = hw * k;
  error = std::abs(hw * (k - g));
}

// Adaptive bisection quadrature; tolerance split between halves.
template <class F>
inline double adaptive_gk(const F& f, double a, double b, double rtol,
                          double atol, int max_depth = 48) {
  struct Rec {
    static double go(const F& f, double a, double b, double rtol, double atol,
                     int depth) {
      double v, e;
      gk15(f, a, b, v, e);
      if (e <= atol + rtol * std::abs(v) || depth <= 0) return v;
      const double m = 0.5 * (a + b);
      return go(f, a, m, rtol, 0.5 * atol, depth - 1) +
             go(f, m, b, rtol, 0.5 * atol, depth - 1);
    }
  };
  if (a == b) return 0.0;
  return Rec::go(f, a, b, rtol, atol, max_depth);
}

}  // namespace sgtw::detail

#endif
