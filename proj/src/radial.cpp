#include "radial.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "monotone_root.hpp"

namespace gg {

namespace {

using boost::math::quadrature::gauss_kronrod;

double gk(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  // On narrow panels the Kronrod-Gauss gap is rounding noise, which the
  // relative tolerance would chase down to the depth limit.
  double err = 0.0, l1 = 0.0;
  const double one = gauss_kronrod<double, 31>::integrate(f, a, b, 0, 1e-13, &err, &l1);
  if (err <= 1e-13 * l1 || std::fabs(b - a) <= 1e-2 * std::fmax(std::fabs(a), std::fabs(b))) return one;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 8, 1e-13);
}

// Offset x with F_tau(lam + x, lam + t) = f_inf + target, i.e.
// incr(lam, x) = target - incr(lam, t).
struct OffsetSolver {
  const TauParams& p;
  double lam;

  double operator()(double target, double t) const {
    const double rhs = target - f_tau_term_increment(lam, t, p);
    auto g = [&](double x) { return f_tau_term_increment(lam, x, p) - rhs; };
    auto dg = [&](double x) { return df_scalar(lam + x, p); };
    const double lower = semiconvex_lower_bound(p) - lam;
    double guess = rhs / df_scalar(lam, p);
    if (std::isfinite(lower) && !(guess > lower)) guess = 0.5 * lower;
    MonotoneRootOptions opts;
    opts.abs_tol = 1e-15 * std::fabs(rhs) + 1e-300;
    opts.bound_gap = 1e-10;
    return solve_increasing(g, dg, lower, guess, opts);
  }
};

}  // namespace

RadialRhs PerturbedRHS::to_rhs() const {
  const double a = amp, z = zeta;
  return RadialRhs{f_inf, [a, z](double r) { return a * std::pow(r, -z); }};
}

void PerturbedRHS::validate(const TauParams& p, double r0) const {
  if (!(zeta > 0.0)) fail(ErrorCode::InadmissibleInput, "zeta=" + fmt_num(zeta) + " must be positive");
  const AdmissibleRange range = attainable_range(p);
  const double f0 = f_inf + amp * std::pow(r0, -zeta);
  for (double v : {f_inf, f0}) {
    if (!range.contains_interior(v)) {
      fail(ErrorCode::InadmissibleInput,
           "f=" + fmt_num(v) + " leaves the attainable range (" + fmt_num(range.lo) + ", " +
               fmt_num(range.hi) + ") of " + branch_name(p.branch));
    }
  }
}

double solve_ddu(const TauParams& p, double f_val, double mu) {
  return solve_second_eigenvalue(p, f_val, mu);
}

RadialIntegrationError::RadialIntegrationError(ErrorCode code, const std::string& detail,
                                               RadialProfile partial, double radius)
    : Error(code, detail), partial_(std::move(partial)), radius_(radius) {}

RadialProfile integrate_radial(const TauParams& p, const RadialRhs& rhs, double r0, double u0,
                               double du0, double r_max, int n_steps) {
  if (!(r0 > 0.0 && r_max > r0)) {
    fail(ErrorCode::InvalidArgument, "need 0 < r0 < r_max, got r0=" + fmt_num(r0) +
                                         ", r_max=" + fmt_num(r_max));
  }
  if (n_steps < 10) fail(ErrorCode::InvalidArgument, "n_steps=" + std::to_string(n_steps) + " below 10");
  const double lam = calibrate_isotropic(p, rhs.f_inf);
  if (!is_admissible(du0 / r0, p)) {
    fail(ErrorCode::InadmissibleInput, "initial u'/r=" + fmt_num(du0 / r0) +
                                           " is not above the semi-convex bound " +
                                           fmt_num(semiconvex_lower_bound(p)));
  }
  const OffsetSolver offset{p, lam};
  const double h = std::log(r_max / r0) / n_steps;

  RadialProfile prof;
  prof.base_curvature = lam;
  auto record = [&](double r, double w, double dw, double x) {
    prof.r.push_back(r);
    prof.w.push_back(w);
    prof.dw.push_back(dw);
    prof.ddw.push_back(x);
    prof.u.push_back(w + 0.5 * lam * r * r);
    prof.du.push_back(dw + lam * r);
    prof.ddu.push_back(lam + x);
  };
  // x = w'' at radius r for first-derivative deviation dw.
  auto curvature = [&](double r, double dw) {
    const double t = dw / r;
    if (!is_admissible(lam + t, p)) {
      throw DomainViolation(1, lam + t, semiconvex_lower_bound(p));
    }
    return offset(rhs.delta ? rhs.delta(r) : 0.0, t);
  };

  double w = u0 - 0.5 * lam * r0 * r0;
  double dw = du0 - lam * r0;
  double x;
  try {
    x = curvature(r0, dw);
  } catch (const Error& e) {
    throw RadialIntegrationError(ErrorCode::NoRoot, "at r=" + fmt_num(r0) + ": " + e.what(), prof, r0);
  }
  record(r0, w, dw, x);

  const double s0 = std::log(r0);
  for (int n = 0; n < n_steps; ++n) {
    const double s = s0 + n * h;
    const double r = std::exp(s);
    const double rm = std::exp(s + 0.5 * h);
    const double rn = (n + 1 == n_steps) ? r_max : std::exp(s + h);
    // d/ds (w, w') = (r w', r w'').
    const double k1w = r * dw, k1d = r * x;
    double k2w, k2d, k3w, k3d, k4w, k4d;
    try {
      const double d2 = dw + 0.5 * h * k1d;
      k2w = rm * d2;
      k2d = rm * curvature(rm, d2);
      const double d3 = dw + 0.5 * h * k2d;
      k3w = rm * d3;
      k3d = rm * curvature(rm, d3);
      const double d4 = dw + h * k3d;
      k4w = rn * d4;
      k4d = rn * curvature(rn, d4);
    } catch (const Error& e) {
      throw RadialIntegrationError(ErrorCode::StepTooLarge,
                                   "RK4 stage between r=" + fmt_num(r) + " and r=" + fmt_num(rn) +
                                       " left the admissible cone: " + e.what(),
                                   prof, r);
    }
    w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    dw += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    try {
      x = curvature(rn, dw);
    } catch (const Error& e) {
      throw RadialIntegrationError(ErrorCode::NoRoot, "at r=" + fmt_num(rn) + ": " + e.what(), prof,
                                   rn);
    }
    record(rn, w, dw, x);
  }
  return prof;
}

RadialProfile integrate_radial(const TauParams& p, const PerturbedRHS& rhs, double r0, double u0,
                               double du0, double r_max, int n_steps) {
  rhs.validate(p, r0);
  return integrate_radial(p, rhs.to_rhs(), r0, u0, du0, r_max, n_steps);
}

std::vector<double> ma_radial_oracle(const std::function<double(double)>& psi, double r0,
                                     double du0, const std::vector<double>& r) {
  std::vector<double> out(r.size());
  double acc = 0.0;
  double prev = r0;
  auto integrand = [&](double s) { return s * psi(s); };
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (r[j] < prev) fail(ErrorCode::InvalidArgument, "oracle radii must increase from r0");
    acc += gk(integrand, prev, r[j]);
    prev = r[j];
    const double rad = du0 * du0 + 2.0 * acc;
    if (!(rad > 0.0)) {
      fail(ErrorCode::NegativeRadicand, "radicand " + fmt_num(rad) + " at r=" + fmt_num(r[j]));
    }
    out[j] = std::sqrt(rad);
  }
  return out;
}

std::vector<double> ma_radial_oracle_deviation(const std::function<double(double)>& psi_minus_one,
                                               double r0, double du0,
                                               const std::vector<double>& r) {
  std::vector<double> out(r.size());
  double acc = 0.0;
  double prev = r0;
  auto integrand = [&](double s) { return s * psi_minus_one(s); };
  const double base = du0 * du0 - r0 * r0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (r[j] < prev) fail(ErrorCode::InvalidArgument, "oracle radii must increase from r0");
    acc += gk(integrand, prev, r[j]);
    prev = r[j];
    // u'^2 - r^2 = du0^2 - r0^2 + 2 int s (psi - 1) ds
    const double d = base + 2.0 * acc;
    const double rad = r[j] * r[j] + d;
    if (!(rad > 0.0)) {
      fail(ErrorCode::NegativeRadicand, "radicand " + fmt_num(rad) + " at r=" + fmt_num(r[j]));
    }
    out[j] = d / (std::sqrt(rad) + r[j]);
  }
  return out;
}

Counterexample counterexample_zeta2(double c, double r_max, int per_decade) {
  if (!(c > -0.5)) {
    fail(ErrorCode::NegativeRadicand, "c=" + fmt_num(c) + " must exceed -1/2");
  }
  if (!(r_max > 10.0)) fail(ErrorCode::InvalidArgument, "r_max=" + fmt_num(r_max) + " must exceed 10");
  const int n = std::max(2, static_cast<int>(std::ceil(per_decade * std::log10(r_max)))) + 1;
  std::vector<double> r(n);
  for (int j = 0; j < n; ++j) r[j] = (j + 1 == n) ? r_max : std::pow(r_max, double(j) / (n - 1));

  auto psi_m1 = [c](double s) { return c / (s * s); };
  const std::vector<double> dev = ma_radial_oracle_deviation(psi_m1, 1.0, 1.0, r);

  // w(r) = int_1^r (u' - s) ds, with u' - s re-evaluated inside each panel.
  auto inner = [&](double s) { return s * psi_m1(s); };
  Counterexample out;
  out.profile.base_curvature = 1.0;
  double w = 0.0;
  double i_prev = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j > 0) {
      const double a = r[j - 1];
      const double ia = i_prev;
      auto dev_at = [&](double s) {
        const double d = 2.0 * (ia + gk(inner, a, s));
        return d / (std::sqrt(s * s + d) + s);
      };
      w += gk(dev_at, a, r[j]);
      i_prev += gk(inner, a, r[j]);
    }
    const double rj = r[j];
    const double du = rj + dev[j];
    out.profile.r.push_back(rj);
    out.profile.w.push_back(w);
    out.profile.dw.push_back(dev[j]);
    out.profile.u.push_back(0.5 * rj * rj + w);
    out.profile.du.push_back(du);
    // u'' u'/r = psi
    const double ddu = (1.0 + psi_m1(rj)) * rj / du;
    out.profile.ddu.push_back(ddu);
    out.profile.ddw.push_back(ddu - 1.0);
    out.deviation.push_back(w);
  }

  std::vector<double> fr, fw;
  for (int j = 0; j < n; ++j) {
    if (r[j] >= out.fit_lo) {
      fr.push_back(r[j]);
      fw.push_back(out.deviation[j]);
    }
  }
  bool all_zero = true;
  for (double v : fw) all_zero = all_zero && v == 0.0;
  if (all_zero) {
    out.fit = DecayFit{};
    out.fit.q_snapped = true;
    return out;
  }
  out.fit = decay_fit(fr, fw);
  Eigen::MatrixXd x(fr.size(), 2);
  Eigen::VectorXd y(fr.size());
  for (std::size_t t = 0; t < fr.size(); ++t) {
    const double l = std::log(fr[t]);
    x(t, 0) = l * l;
    x(t, 1) = 1.0;
    y(t) = fw[t];
  }
  const LsqResult ls = least_squares(x, y);
  out.log2_coef = ls.coef(0);
  out.constant = ls.coef(1);
  return out;
}

}  // namespace gg
