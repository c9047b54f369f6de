#ifndef SGTW_PARAMS_HPP
#define SGTW_PARAMS_HPP

namespace sgtw {

// Physical parameters (alpha, gamma) of the wave equation together with
// the reduced ones (mu, v, epsilon) of the travelling-frame ODE.  For
// |v| < 1 and alpha > 0 they are tied by mu = alpha / sqrt(v^-2 - 1);
// epsilon is the sign of g'.
struct SystemParams {
  double alpha = 0.0;
  double gamma = 0.0;
  double mu = 0.0;
  double v = 0.0;
  int epsilon = +1;

  // Derives |v| from mu (v carries no helicity sign here).
  static SystemParams from_mu(double alpha, double gamma, double mu,
                              int epsilon = +1);
  // Derives mu from a subluminal velocity.
  static SystemParams from_velocity(double alpha, double gamma, double v,
                                    int epsilon = +1);

  void validate() const;  // throws sgtw::Error on violated invariants
};

}  // namespace sgtw

#endif
