#pragma once

#include <functional>
#include <vector>

#include "error.hpp"
#include "ftau.hpp"
#include "loglog.hpp"

namespace gg {

/// Samples of a radial solution. The Hessian eigenvalues at radius r are
/// ddu and du/r. The integrator also records the deviation w = u - lam r^2/2
/// from the calibrated quadratic, which keeps full relative precision where
/// u itself is dominated by the quadratic.
struct RadialProfile {
  std::vector<double> r, u, du, ddu;
  double base_curvature = 0.0;
  std::vector<double> w, dw, ddw;
};

/// f(r) = f_inf + delta(r).
struct RadialRhs {
  double f_inf = 0.0;
  std::function<double(double)> delta = [](double) { return 0.0; };

  double operator()(double r) const { return f_inf + (delta ? delta(r) : 0.0); }
};

/// f(r) = f_inf + amp r^-zeta.
struct PerturbedRHS {
  double f_inf = 0.0;
  double amp = 0.0;
  double zeta = 3.0;

  RadialRhs to_rhs() const;
  /// INADMISSIBLE_INPUT unless f stays inside the attainable range for r >= r0.
  void validate(const TauParams& p, double r0) const;
};

/// The u'' with F_tau(u'', mu) = f_val (NO_ROOT if unattainable).
double solve_ddu(const TauParams& p, double f_val, double mu);

/// Thrown when the trajectory leaves the admissible cone; carries the
/// profile up to the last accepted node.
class RadialIntegrationError : public Error {
 public:
  RadialIntegrationError(ErrorCode code, const std::string& detail, RadialProfile partial,
                         double radius);

  const RadialProfile& partial() const noexcept { return partial_; }
  double radius() const noexcept { return radius_; }

 private:
  RadialProfile partial_;
  double radius_;
};

/// Classical RK4 in s = ln r with n_steps uniform steps on [r0, r_max].
/// u'' comes from F_tau(u'', u'/r) = f(r), solved for the offset from the
/// calibrated curvature so small perturbations keep their precision.
RadialProfile integrate_radial(const TauParams& p, const RadialRhs& rhs, double r0, double u0,
                               double du0, double r_max, int n_steps);

RadialProfile integrate_radial(const TauParams& p, const PerturbedRHS& rhs, double r0, double u0,
                               double du0, double r_max, int n_steps);

/// Monge-Ampere radial oracle: u'(r) = sqrt(du0^2 + 2 int_r0^r s psi(s) ds)
/// by adaptive Gauss-Kronrod quadrature. `r` must be increasing and >= r0.
/// NEGATIVE_RADICAND when the radicand is not positive.
std::vector<double> ma_radial_oracle(const std::function<double(double)>& psi, double r0,
                                     double du0, const std::vector<double>& r);

/// u'(r) - r for psi = 1 + psi_minus_one, computed without cancellation.
std::vector<double> ma_radial_oracle_deviation(const std::function<double(double)>& psi_minus_one,
                                               double r0, double du0,
                                               const std::vector<double>& r);

struct Counterexample {
  RadialProfile profile;
  /// u - r^2/2 on profile.r
  std::vector<double> deviation;
  /// Decay class of the deviation on [fit_lo, r_max].
  DecayFit fit;
  /// Least-squares coefficients of deviation ~ log2_coef (ln r)^2 + constant.
  double log2_coef = 0.0;
  double constant = 0.0;
  double fit_lo = 10.0;
};

/// Monge-Ampere radial solution with psi = 1 + c r^-2, u(1) = 1/2, u'(1) = 1,
/// sampled at `per_decade` log-spaced radii per decade on [1, r_max].
Counterexample counterexample_zeta2(double c, double r_max, int per_decade = 40);

}  // namespace gg
