#pragma once

#include <array>
#include <string>

#include "sym2.hpp"

namespace gg {

/// Regimes of the operator family, named by the equation each one reduces to.
enum class Branch {
  MongeAmpere,        // tau = 0
  SubQuarter,         // 0 < tau < pi/4
  Quarter,            // tau = pi/4, inverse harmonic Hessian
  SuperQuarter,       // pi/4 < tau < pi/2
  SpecialLagrangian,  // tau = pi/2
};

const char* branch_name(Branch b);

/// Regime descriptor. `a` and `b_coef` are +inf on the Monge-Ampere branch,
/// where cot(tau) is undefined.
struct TauParams {
  double tau = 0.0;
  double a = 0.0;
  double b_coef = 0.0;
  double sin_tau = 0.0;
  double cos_tau = 1.0;
  Branch branch = Branch::MongeAmpere;
};

/// Breakpoints 0, pi/4, pi/2 are snapped to within 1e-12.
TauParams tau_params(double tau);

using Eigenpair = std::array<double, 2>;

/// Strict lower bound on admissible eigenvalues (may be -inf).
double semiconvex_lower_bound(const TauParams& p);

/// Throws DomainViolation when lam is not strictly above the bound.
void check_admissible(double lam, const TauParams& p, int index = 0);
void check_admissible(const Eigenpair& lam, const TauParams& p);
bool is_admissible(double lam, const TauParams& p);

/// One summand of F_tau, so that F_tau(lam) = term(lam1) + term(lam2).
double f_tau_term(double lam, const TauParams& p);

/// F_tau on a pair of eigenvalues (n = 2).
double f_tau(const Eigenpair& lam, const TauParams& p);
double f_tau(const SymMat2& m, const TauParams& p);

/// term(lam + t) - term(lam), accurate to relative precision for small t.
double f_tau_term_increment(double lam, double t, const TauParams& p);

/// Derivative of one summand via 1/(sin(tau) lam^2 + 2 cos(tau) lam + sin(tau)).
double df_scalar(double lam, const TauParams& p);

/// Same derivative from the closed form of each branch separately.
double df_scalar_branchwise(double lam, const TauParams& p);

/// Gradient of F_tau(lambda(M)) with respect to M at A (functional calculus).
SymMat2 df_mat(const SymMat2& a, const TauParams& p);

/// P = (sin(tau) A^2 + 2 cos(tau) A + sin(tau) I) / 2. Throws
/// NotPositiveDefinite if an eigenvalue of P is not positive.
SymMat2 matrix_P(const SymMat2& a, const TauParams& p);

/// Symmetric square root and inverse of a positive definite matrix.
SymMat2 sqrt_spd(const SymMat2& m);
SymMat2 inverse_spd(const SymMat2& m);

struct AdmissibleRange {
  double lo = 0.0;
  double hi = 0.0;
  bool open_lo = true;
  bool open_hi = true;

  bool contains_interior(double v) const { return v > lo && v < hi; }
};

/// Values F_tau attains over matrices satisfying the semi-convex bound.
AdmissibleRange attainable_range(const TauParams& p);

/// True when f_inf lies strictly inside the attainable range and, on the
/// special Lagrangian branch, differs from the critical phase 0.
bool limit_value_admissible(const TauParams& p, double f_inf);

/// lam2 with F_tau(lam1, lam2) = f_inf to 1e-12.
double calibrate_diagonal(const TauParams& p, double f_inf, double lam1);

/// lam with F_tau(lam, lam) = f_inf.
double calibrate_isotropic(const TauParams& p, double f_inf);

/// Second eigenvalue solving F_tau(x, mu) = f_val; NoRoot if unattainable.
double solve_second_eigenvalue(const TauParams& p, double f_val, double mu);

/// cos(f) tr(M) + sin(f) det(M) - sin(f).
double algebraic_residual_spl(const SymMat2& m, double fval);

/// Value, gradient and Hessian of a function at a point.
struct PointJet {
  Vec2 x;
  double value = 0.0;
  Vec2 grad;
  SymMat2 hess;
};

/// v = (u + a|x|^2/2)/b on the super-quarter branch; D^2 v > -I.
PointJet reduce_superquarter(const PointJet& u, const TauParams& p);

/// Phase of the reduced special Lagrangian equation: (b/sqrt(a^2+1)) g + pi/2.
double superquarter_phase(double g, const TauParams& p);

}  // namespace gg
