#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftau.hpp"
#include "loglog.hpp"
#include "poisson.hpp"
#include "radial.hpp"

namespace gg {

/// u ~ x^T A x / 2 + b.x + c + d ln(x^T P x) + (d1 y1 + d2 y2)/|y|^2, y = P^(1/2) x.
struct AsymptoticCoefficients {
  SymMat2 A = SymMat2::identity();
  Vec2 b;
  double c = 0.0;
  double d = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// SINGULAR_P unless P is positive definite; INVALID_ARGUMENT at x = 0.
double expansion_value(const AsymptoticCoefficients& cf, const SymMat2& P, Vec2 x);

/// Everything but the quadratic term.
double expansion_perturbation(const AsymptoticCoefficients& cf, const SymMat2& P, Vec2 x);

SymMat2 expansion_hessian(const AsymptoticCoefficients& cf, const SymMat2& P, Vec2 x);

/// Hessian minus A.
SymMat2 expansion_hessian_perturbation(const AsymptoticCoefficients& cf, const SymMat2& P, Vec2 x);

/// Hessian of the d1/d2 term in y-coordinates.
SymMat2 dipole_hessian_y(double d1, double d2, Vec2 y);

struct ManufacturedRhs {
  ScalarField f;
  /// f - f_inf, computed from eigenvalue increments so it keeps full
  /// relative precision far out.
  ScalarField delta;
  double f_inf = 0.0;
  SymMat2 P;
  /// Decay of the circle norms of delta.
  std::optional<DecayFit> decay;
};

/// f = F_tau(lambda(D^2 u)) for the ansatz u with P = matrix_P(A).
/// DOMAIN_VIOLATION names the offending node.
ManufacturedRhs manufacture_rhs(const AsymptoticCoefficients& cf, const TauParams& p,
                                const AnnulusGrid& grid);

/// Ansatz values on a grid with P = p_scale * matrix_P(A).
ScalarField sample_expansion(const AsymptoticCoefficients& cf, const TauParams& p,
                             const AnnulusGrid& grid, double p_scale = 1.0);

struct FitReport {
  AsymptoticCoefficients coeffs;
  SymMat2 P;
  std::optional<double> residual_p;
  double residual_q = 0.0;
  double condition = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  /// |F_tau(lambda(A)) - f_inf| before projection onto the level set.
  double level_residual = 0.0;
  bool projected = false;
  /// Largest absolute residual over the window.
  double residual_max = 0.0;
  std::optional<DecayFit> residual_fit;
};

/// Flat JSON object with keys A11 A12 A22 b1 b2 c d d1 d2 residual_p
/// residual_q condition r_lo r_hi (residual_p is null when not reported).
std::string fit_report_json(const FitReport& r);

struct FitOptions {
  double r_lo = 100.0;
  double r_hi = 1e4;
  /// Fit with P = p_scale * matrix_P(A).
  double p_scale = 1.0;
  int iterations = 4;
};

/// Two-stage least squares over the nodes with r_lo <= r <= r_hi.
/// WINDOW_TOO_NARROW unless the window lies in the grid and spans a factor 5;
/// ILL_CONDITIONED when the design is numerically rank deficient.
FitReport fit_expansion(const ScalarField& u, const TauParams& p, double f_inf,
                        const FitOptions& opts);

struct RadialFitOptions {
  double r_lo = 10.0;
  double r_hi = 1e4;
  /// Fit an extra power term r^-s with s found by variable projection, so
  /// that the slowly decaying remainder does not leak into c and d.
  bool power_term = true;
  double s_min = 0.05;
  double s_max = 4.0;
  /// Further decaying powers r^-e fitted alongside (not subtracted from the
  /// remainder). r^-2 is the generic next term of radial solutions.
  std::vector<double> fixed_powers = {2.0};
};

struct RadialFitReport {
  FitReport report;
  /// w - c - d ln(x^T P x) on the window radii.
  std::vector<double> r;
  std::vector<double> remainder;
  double power_s = 0.0;
  double power_coef = 0.0;
};

/// Fit of a radial profile with A = lam I, b = d1 = d2 = 0 fixed by symmetry.
RadialFitReport fit_radial_expansion(const RadialProfile& prof, const TauParams& p, double f_inf,
                                     const RadialFitOptions& opts);

enum class RateOrder { Behavior, Next };

struct Rate {
  double p = 0.0;
  double q = 0.0;
};

/// Remainder classes of the expansion: Behavior needs zeta > 2, Next zeta > 3
/// (OUT_OF_RANGE otherwise).
Rate theorem_rate(double zeta, RateOrder order);

}  // namespace gg
