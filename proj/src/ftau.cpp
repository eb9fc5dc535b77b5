#include "ftau.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "error.hpp"
#include "monotone_root.hpp"

namespace gg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSnap = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// sqrt(a^2 + 1) = 1/sin(tau) away from tau = 0.
double csc(const TauParams& p) { return 1.0 / p.sin_tau; }

}  // namespace

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::MongeAmpere: return "MA";
    case Branch::SubQuarter: return "SUBQUARTER";
    case Branch::Quarter: return "QUARTER";
    case Branch::SuperQuarter: return "SUPERQUARTER";
    case Branch::SpecialLagrangian: return "SPL";
  }
  return "?";
}

TauParams tau_params(double tau) {
  if (!(tau >= -kSnap && tau <= kPi / 2 + kSnap)) {
    fail(ErrorCode::OutOfRange, "tau=" + fmt_num(tau) + " outside [0, pi/2]");
  }
  TauParams p;
  if (std::fabs(tau) < kSnap) {
    p.tau = 0.0;
    p.a = kInf;
    p.b_coef = kInf;
    p.sin_tau = 0.0;
    p.cos_tau = 1.0;
    p.branch = Branch::MongeAmpere;
  } else if (std::fabs(tau - kPi / 4) < kSnap) {
    p.tau = kPi / 4;
    p.a = 1.0;
    p.b_coef = 0.0;
    p.sin_tau = p.cos_tau = kSqrt2 / 2;
    p.branch = Branch::Quarter;
  } else if (std::fabs(tau - kPi / 2) < kSnap) {
    p.tau = kPi / 2;
    p.a = 0.0;
    p.b_coef = 1.0;
    p.sin_tau = 1.0;
    p.cos_tau = 0.0;
    p.branch = Branch::SpecialLagrangian;
  } else {
    p.tau = tau;
    p.sin_tau = std::sin(tau);
    p.cos_tau = std::cos(tau);
    p.a = p.cos_tau / p.sin_tau;
    p.b_coef = std::sqrt(std::fabs(p.a * p.a - 1.0));
    p.branch = tau < kPi / 4 ? Branch::SubQuarter : Branch::SuperQuarter;
  }
  return p;
}

double semiconvex_lower_bound(const TauParams& p) {
  switch (p.branch) {
    case Branch::MongeAmpere: return 0.0;
    case Branch::SubQuarter: return -(p.a - p.b_coef);
    case Branch::Quarter: return -1.0;
    case Branch::SuperQuarter: return -(p.a + p.b_coef);
    case Branch::SpecialLagrangian: return -kInf;
  }
  return -kInf;
}

bool is_admissible(double lam, const TauParams& p) {
  return lam > semiconvex_lower_bound(p) && std::isfinite(lam);
}

void check_admissible(double lam, const TauParams& p, int index) {
  if (!is_admissible(lam, p)) throw DomainViolation(index, lam, semiconvex_lower_bound(p));
}

void check_admissible(const Eigenpair& lam, const TauParams& p) {
  check_admissible(lam[0], p, 0);
  check_admissible(lam[1], p, 1);
}

double f_tau_term(double lam, const TauParams& p) {
  const double a = p.a;
  const double b = p.b_coef;
  switch (p.branch) {
    case Branch::MongeAmpere: return 0.5 * std::log(lam);
    case Branch::SubQuarter: return csc(p) / (2.0 * b) * std::log((lam + a - b) / (lam + a + b));
    case Branch::Quarter: return -kSqrt2 / (1.0 + lam);
    case Branch::SuperQuarter: return csc(p) / b * std::atan((lam + a - b) / (lam + a + b));
    case Branch::SpecialLagrangian: return std::atan(lam);
  }
  return 0.0;
}

double f_tau(const Eigenpair& lam, const TauParams& p) {
  check_admissible(lam, p);
  return f_tau_term(lam[0], p) + f_tau_term(lam[1], p);
}

double f_tau(const SymMat2& m, const TauParams& p) { return f_tau(eigs(m).values(), p); }

double f_tau_term_increment(double lam, double t, const TauParams& p) {
  const double a = p.a;
  const double b = p.b_coef;
  switch (p.branch) {
    case Branch::MongeAmpere: return 0.5 * std::log1p(t / lam);
    case Branch::SubQuarter:
      return csc(p) / (2.0 * b) *
             (std::log1p(t / (lam + a - b)) - std::log1p(t / (lam + a + b)));
    case Branch::Quarter: return kSqrt2 * t / ((1.0 + lam) * (1.0 + lam + t));
    case Branch::SuperQuarter:
      return csc(p) / b * std::atan2(b * t, b * b + (lam + a) * (lam + a + t));
    case Branch::SpecialLagrangian: return std::atan2(t, 1.0 + lam * (lam + t));
  }
  return 0.0;
}

double df_scalar(double lam, const TauParams& p) {
  check_admissible(lam, p);
  return 1.0 / (p.sin_tau * lam * lam + 2.0 * p.cos_tau * lam + p.sin_tau);
}

double df_scalar_branchwise(double lam, const TauParams& p) {
  check_admissible(lam, p);
  const double a = p.a;
  const double b = p.b_coef;
  switch (p.branch) {
    case Branch::MongeAmpere: return 1.0 / (2.0 * lam);
    case Branch::SubQuarter:
      return csc(p) / (2.0 * b) * (1.0 / (lam + a - b) - 1.0 / (lam + a + b));
    case Branch::Quarter: return kSqrt2 / ((1.0 + lam) * (1.0 + lam));
    case Branch::SuperQuarter: {
      const double up = lam + a + b;
      const double dn = lam + a - b;
      return csc(p) / b * (2.0 * b / (up * up + dn * dn));
    }
    case Branch::SpecialLagrangian: return 1.0 / (1.0 + lam * lam);
  }
  return 0.0;
}

SymMat2 df_mat(const SymMat2& a, const TauParams& p) {
  const Spectrum sp = eigs(a);
  check_admissible(sp.values(), p);
  return sp.map([&](double l) { return df_scalar(l, p); });
}

SymMat2 matrix_P(const SymMat2& a, const TauParams& p) {
  const Spectrum sp = eigs(a);
  check_admissible(sp.values(), p);
  auto poly = [&](double l) { return 0.5 * (p.sin_tau * l * l + 2.0 * p.cos_tau * l + p.sin_tau); };
  const double p1 = poly(sp.lam1);
  const double p2 = poly(sp.lam2);
  if (!(p1 > 0.0 && p2 > 0.0)) {
    fail(ErrorCode::NotPositiveDefinite,
         "P eigenvalues (" + fmt_num(p1) + ", " + fmt_num(p2) + ") not positive");
  }
  return sp.with_values(p1, p2);
}

SymMat2 sqrt_spd(const SymMat2& m) {
  const Spectrum sp = eigs(m);
  if (!(sp.lam1 > 0.0)) {
    fail(ErrorCode::NotPositiveDefinite, "smallest eigenvalue " + fmt_num(sp.lam1));
  }
  return sp.map([](double l) { return std::sqrt(l); });
}

SymMat2 inverse_spd(const SymMat2& m) {
  const Spectrum sp = eigs(m);
  if (!(sp.lam1 > 0.0)) {
    fail(ErrorCode::NotPositiveDefinite, "smallest eigenvalue " + fmt_num(sp.lam1));
  }
  return sp.map([](double l) { return 1.0 / l; });
}

AdmissibleRange attainable_range(const TauParams& p) {
  switch (p.branch) {
    case Branch::MongeAmpere: return {-kInf, kInf, true, true};
    case Branch::SubQuarter:
    case Branch::Quarter: return {-kInf, 0.0, true, true};
    case Branch::SuperQuarter: {
      const double s = csc(p) / p.b_coef;
      // Each summand ranges over (-pi/2, pi/4) after the arctan shift.
      return {-kPi * s, 0.5 * kPi * s, true, true};
    }
    case Branch::SpecialLagrangian: return {-kPi, kPi, true, true};
  }
  return {};
}

bool limit_value_admissible(const TauParams& p, double f_inf) {
  if (!attainable_range(p).contains_interior(f_inf)) return false;
  return p.branch != Branch::SpecialLagrangian || f_inf != 0.0;
}

double solve_second_eigenvalue(const TauParams& p, double f_val, double mu) {
  check_admissible(mu, p);
  const double fixed = f_tau_term(mu, p);
  auto g = [&](double x) { return f_tau_term(x, p) + fixed - f_val; };
  auto dg = [&](double x) { return df_scalar(x, p); };
  const double lower = semiconvex_lower_bound(p);
  MonotoneRootOptions opts;
  opts.abs_tol = 1e-12;
  return solve_increasing(g, dg, lower, mu, opts);
}

double calibrate_diagonal(const TauParams& p, double f_inf, double lam1) {
  if (!is_admissible(lam1, p)) {
    fail(ErrorCode::InadmissibleInput, "lam1=" + fmt_num(lam1) + " not above the bound " +
                                           fmt_num(semiconvex_lower_bound(p)));
  }
  const AdmissibleRange range = attainable_range(p);
  if (!range.contains_interior(f_inf)) {
    fail(ErrorCode::OutOfRange, "f_inf=" + fmt_num(f_inf) + " not inside the attainable range (" +
                                    fmt_num(range.lo) + ", " + fmt_num(range.hi) + ") of " +
                                    branch_name(p.branch));
  }
  return solve_second_eigenvalue(p, f_inf, lam1);
}

double calibrate_isotropic(const TauParams& p, double f_inf) {
  const AdmissibleRange range = attainable_range(p);
  if (!range.contains_interior(f_inf)) {
    fail(ErrorCode::OutOfRange, "f_inf=" + fmt_num(f_inf) + " not inside the attainable range (" +
                                    fmt_num(range.lo) + ", " + fmt_num(range.hi) + ") of " +
                                    branch_name(p.branch));
  }
  auto g = [&](double x) { return 2.0 * f_tau_term(x, p) - f_inf; };
  auto dg = [&](double x) { return 2.0 * df_scalar(x, p); };
  const double lower = semiconvex_lower_bound(p);
  const double guess = std::isfinite(lower) ? lower + 1.0 : 0.0;
  MonotoneRootOptions opts;
  opts.abs_tol = 1e-14;
  return solve_increasing(g, dg, lower, guess, opts);
}

double algebraic_residual_spl(const SymMat2& m, double fval) {
  return std::cos(fval) * m.trace() + std::sin(fval) * m.det() - std::sin(fval);
}

PointJet reduce_superquarter(const PointJet& u, const TauParams& p) {
  if (p.branch != Branch::SuperQuarter) {
    fail(ErrorCode::InvalidArgument,
         std::string("reduction needs the SUPERQUARTER branch, got ") + branch_name(p.branch));
  }
  check_admissible(eigs(u.hess).values(), p);
  const double a = p.a;
  const double inv_b = 1.0 / p.b_coef;
  PointJet v;
  v.x = u.x;
  v.value = inv_b * (u.value + 0.5 * a * u.x.norm2());
  v.grad = inv_b * (u.grad + a * u.x);
  v.hess = inv_b * (u.hess + SymMat2::scalar(a));
  return v;
}

double superquarter_phase(double g, const TauParams& p) {
  return p.b_coef * p.sin_tau * g + 0.5 * kPi;
}

}  // namespace gg
