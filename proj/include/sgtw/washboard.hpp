#ifndef SGTW_WASHBOARD_HPP
#define SGTW_WASHBOARD_HPP

#include <complex>
#include <vector>

#include "sgtw/params.hpp"

namespace sgtw::washboard {

// Tilted periodic ("washboard") potential U(g) = -(cos g + gamma*g) that
// drives the travelling-frame particle.  Angles are plain radians on the
// whole real line; nothing is ever wrapped mod 2*pi.
double potential(double g, double gamma);
double potential_slope(double g, double gamma);  // U_g = sin g - gamma

// gamma == 1 is handled as an exact degenerate branch.
bool is_degenerate_gamma(double gamma);

enum class CriticalKind { minimum, maximum, inflection };

struct CriticalPoint {
  double g = 0.0;
  int k = 0;
  CriticalKind kind = CriticalKind::minimum;
};

double g_min_point(double gamma, int k);  // asin(gamma) + 2k*pi
double g_max_point(double gamma, int k);  // -asin(gamma) + (2k+1)*pi

// Minima/maxima (gamma < 1) or inflections (gamma == 1) with lattice
// index in [k_lo, k_hi], ordered by location.  Empty for gamma > 1.
std::vector<CriticalPoint> critical_points(double gamma, int k_lo, int k_hi);

enum class SingularKind { saddle, node, focus, center, saddle_node };

struct SingularPointReport {
  CriticalPoint point;
  SingularKind classification = SingularKind::saddle;
  std::complex<double> lambda1, lambda2;
};

// Local linearization of the autonomous flow at a critical point.  The
// eigenvalues solve lambda^2 + mu*lambda -+ sqrt(1 - gamma^2) = 0 (upper
// sign at maxima, lower at minima).
SingularPointReport classify_singular_point(const CriticalPoint& p, double mu,
                                            double gamma);

// Leading slopes u_{eps' eps} of the four separatrices at a saddle:
// u = (eps'*mu + eps*sqrt(mu^2 + 4*sqrt(1-gamma^2))) / 2.
struct SeparatrixSlopes {
  double pp = 0.0, pm = 0.0, mp = 0.0, mm = 0.0;
  double get(int eps_prime, int eps) const;
};

SeparatrixSlopes separatrix_slopes(double mu, double gamma);

}  // namespace sgtw::washboard

#endif
