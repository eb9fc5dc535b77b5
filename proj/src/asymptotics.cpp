#include "asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "error.hpp"
#include "monotone_root.hpp"

namespace gg {

namespace {

SymMat2 checked_sqrt(const SymMat2& P) {
  const Spectrum sp = eigs(P);
  if (!(sp.lam1 > 0.0) || !std::isfinite(sp.lam2)) {
    fail(ErrorCode::SingularP, "P eigenvalues (" + fmt_num(sp.lam1) + ", " + fmt_num(sp.lam2) +
                                   ") are not positive");
  }
  return sp.map([](double l) { return std::sqrt(l); });
}

void check_point(Vec2 x) {
  if (x.x == 0.0 && x.y == 0.0) fail(ErrorCode::InvalidArgument, "expansion is singular at x = 0");
}

double level_value(const Eigenpair& lam, const TauParams& p) { return f_tau(lam, p); }

// Shift both eigenvalues of A by the same t so that F_tau(lambda(A)) = f_inf.
SymMat2 project_to_level(const SymMat2& A, const TauParams& p, double f_inf) {
  const Spectrum sp = eigs(A);
  check_admissible(sp.values(), p);
  const double base = f_tau(sp.values(), p) - f_inf;
  auto g = [&](double t) {
    return base + f_tau_term_increment(sp.lam1, t, p) + f_tau_term_increment(sp.lam2, t, p);
  };
  auto dg = [&](double t) { return df_scalar(sp.lam1 + t, p) + df_scalar(sp.lam2 + t, p); };
  MonotoneRootOptions opts;
  opts.abs_tol = 1e-15;
  const double t = solve_increasing(g, dg, semiconvex_lower_bound(p) - sp.lam1, 0.0, opts);
  return A + SymMat2::scalar(t);
}

struct WindowNode {
  int j;
  double r;
};

std::vector<WindowNode> window_nodes(const std::vector<double>& radii, double lo, double hi) {
  std::vector<WindowNode> out;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    if (radii[j] >= lo * (1.0 - 1e-12) && radii[j] <= hi * (1.0 + 1e-12)) {
      out.push_back({static_cast<int>(j), radii[j]});
    }
  }
  return out;
}

void check_window(double lo, double hi, double grid_lo, double grid_hi) {
  if (!(lo > 0.0) || lo < grid_lo * (1.0 - 1e-12) || hi > grid_hi * (1.0 + 1e-12)) {
    fail(ErrorCode::WindowTooNarrow, "window [" + fmt_num(lo) + ", " + fmt_num(hi) +
                                         "] is not inside the sampled range [" + fmt_num(grid_lo) +
                                         ", " + fmt_num(grid_hi) + "]");
  }
  if (!(hi >= 5.0 * lo)) {
    fail(ErrorCode::WindowTooNarrow,
         "window spans a factor " + fmt_num(hi / lo) + ", need at least 5");
  }
}

}  // namespace

SymMat2 dipole_hessian_y(double d1, double d2, Vec2 y) {
  const double rho = y.norm2();
  const double g = d1 * y.x + d2 * y.y;
  const double r2 = rho * rho;
  const double r3 = r2 * rho;
  return {-4.0 * d1 * y.x / r2 - 2.0 * g / r2 + 8.0 * g * y.x * y.x / r3,
          -2.0 * (d1 * y.y + d2 * y.x) / r2 + 8.0 * g * y.x * y.y / r3,
          -4.0 * d2 * y.y / r2 - 2.0 * g / r2 + 8.0 * g * y.y * y.y / r3};
}

double expansion_perturbation(const AsymptoticCoefficients& cf, const SymMat2& P, Vec2 x) {
  check_point(x);
  const SymMat2 S = checked_sqrt(P);
  const Vec2 y = S.apply(x);
  const double rho = y.norm2();
  return cf.b.dot(x) + cf.c + cf.d * std::log(rho) + (cf.d1 * y.x + cf.d2 * y.y) / rho;
}

double expansion_value(const AsymptoticCoefficients& cf, const SymMat2& P, Vec2 x) {
  return 0.5 * cf.A.quad_form(x) + expansion_perturbation(cf, P, x);
}

SymMat2 expansion_hessian_perturbation(const AsymptoticCoefficients& cf, const SymMat2& P, Vec2 x) {
  check_point(x);
  const SymMat2 S = checked_sqrt(P);
  const Vec2 y = S.apply(x);
  const Vec2 px = P.apply(x);
  const double rho = y.norm2();
  const SymMat2 log_part = (2.0 / rho) * P - (4.0 / (rho * rho)) * SymMat2::outer(px);
  const SymMat2 dip = congruence(S, dipole_hessian_y(cf.d1, cf.d2, y));
  return cf.d * log_part + dip;
}

SymMat2 expansion_hessian(const AsymptoticCoefficients& cf, const SymMat2& P, Vec2 x) {
  return cf.A + expansion_hessian_perturbation(cf, P, x);
}

ManufacturedRhs manufacture_rhs(const AsymptoticCoefficients& cf, const TauParams& p,
                                const AnnulusGrid& grid) {
  grid.validate();
  const Spectrum base = eigs(cf.A);
  check_admissible(base.values(), p);
  ManufacturedRhs out;
  out.f_inf = f_tau(base.values(), p);
  out.P = matrix_P(cf.A, p);
  const double bound = semiconvex_lower_bound(p);
  auto delta_at = [&](double r, double t) {
    const Vec2 x{r * std::cos(t), r * std::sin(t)};
    const SymMat2 dh = expansion_hessian_perturbation(cf, out.P, x);
    const auto inc = eig_increments(cf.A, dh);
    for (int i = 0; i < 2; ++i) {
      const double lam = base.values()[i] + inc[i];
      if (!(lam > bound)) {
        fail(ErrorCode::DomainViolation, "Hessian eigenvalue " + fmt_num(lam) + " at x=(" +
                                             fmt_num(x.x) + ", " + fmt_num(x.y) +
                                             ") is not above the semi-convex bound " +
                                             fmt_num(bound));
      }
    }
    return f_tau_term_increment(base.lam1, inc[0], p) + f_tau_term_increment(base.lam2, inc[1], p);
  };
  out.delta = sample_field(grid, delta_at);
  out.f = out.delta;
  for (double& v : out.f.values) v += out.f_inf;
  try {
    out.decay = measure_decay_class(grid.radii(), circle_l2_norms(out.delta));
  } catch (const Error&) {
    out.decay.reset();
  }
  return out;
}

ScalarField sample_expansion(const AsymptoticCoefficients& cf, const TauParams& p,
                             const AnnulusGrid& grid, double p_scale) {
  const SymMat2 P = p_scale * matrix_P(cf.A, p);
  return sample_field(grid, [&](double r, double t) {
    return expansion_value(cf, P, {r * std::cos(t), r * std::sin(t)});
  });
}

std::string fit_report_json(const FitReport& r) {
  nlohmann::ordered_json j;
  j["A11"] = r.coeffs.A.m11;
  j["A12"] = r.coeffs.A.m12;
  j["A22"] = r.coeffs.A.m22;
  j["b1"] = r.coeffs.b.x;
  j["b2"] = r.coeffs.b.y;
  j["c"] = r.coeffs.c;
  j["d"] = r.coeffs.d;
  j["d1"] = r.coeffs.d1;
  j["d2"] = r.coeffs.d2;
  if (r.residual_p) {
    j["residual_p"] = *r.residual_p;
  } else {
    j["residual_p"] = nullptr;
  }
  j["residual_q"] = r.residual_q;
  j["condition"] = r.condition;
  j["r_lo"] = r.r_lo;
  j["r_hi"] = r.r_hi;
  return j.dump();
}

FitReport fit_expansion(const ScalarField& u, const TauParams& p, double f_inf,
                        const FitOptions& opts) {
  const AnnulusGrid& grid = u.grid;
  check_window(opts.r_lo, opts.r_hi, grid.r_min, grid.r_max);
  if (!(opts.p_scale > 0.0)) fail(ErrorCode::InvalidArgument, "p_scale must be positive");
  const std::vector<WindowNode> win = window_nodes(grid.radii(), opts.r_lo, opts.r_hi);
  const int nt = grid.n_theta;

  auto point = [&](const WindowNode& w, int i) {
    const double t = grid.angle(i);
    return Vec2{w.r * std::cos(t), w.r * std::sin(t)};
  };

  // Stage 1: quadratic polynomial on the outermost decade.
  std::vector<WindowNode> outer;
  for (const WindowNode& w : win) {
    if (w.r >= std::max(opts.r_lo, opts.r_hi / 10.0) * (1.0 - 1e-12)) outer.push_back(w);
  }
  if (outer.size() < 2) outer.assign(win.end() - std::min<std::size_t>(win.size(), 2), win.end());
  Eigen::MatrixXd x1(outer.size() * nt, 6);
  Eigen::VectorXd y1(outer.size() * nt);
  Eigen::Index row = 0;
  for (const WindowNode& w : outer) {
    for (int i = 0; i < nt; ++i, ++row) {
      const Vec2 x = point(w, i);
      x1.row(row) << x.x * x.x, x.x * x.y, x.y * x.y, x.x, x.y, 1.0;
      y1(row) = u.at(w.j, i);
    }
  }
  const LsqResult s1 = least_squares(x1, y1);
  SymMat2 A{2.0 * s1.coef(0), s1.coef(1), 2.0 * s1.coef(2)};

  FitReport rep;
  rep.r_lo = opts.r_lo;
  rep.r_hi = opts.r_hi;
  rep.level_residual = std::fabs(level_value(eigs(A).values(), p) - f_inf);
  if (rep.level_residual > 1e-8) {
    A = project_to_level(A, p, f_inf);
    rep.projected = true;
  }

  // Stage 2: joint fit with the log and dipole terms, P refreshed from A.
  const Eigen::Index m = static_cast<Eigen::Index>(win.size()) * nt;
  Eigen::VectorXd y2(m);
  row = 0;
  for (const WindowNode& w : win) {
    for (int i = 0; i < nt; ++i, ++row) y2(row) = u.at(w.j, i);
  }
  LsqResult s2;
  SymMat2 P;
  for (int it = 0; it < std::max(1, opts.iterations); ++it) {
    P = opts.p_scale * matrix_P(A, p);
    const SymMat2 S = checked_sqrt(P);
    Eigen::MatrixXd x2(m, 9);
    row = 0;
    for (const WindowNode& w : win) {
      for (int i = 0; i < nt; ++i, ++row) {
        const Vec2 x = point(w, i);
        const Vec2 y = S.apply(x);
        const double rho = y.norm2();
        x2.row(row) << x.x * x.x, x.x * x.y, x.y * x.y, x.x, x.y, 1.0, std::log(rho), y.x / rho,
            y.y / rho;
      }
    }
    s2 = least_squares(x2, y2);
    const SymMat2 next{2.0 * s2.coef(0), s2.coef(1), 2.0 * s2.coef(2)};
    const double change = (next - A).max_abs();
    A = next;
    if (change <= 1e-15 * std::max(1.0, A.max_abs())) break;
  }
  if (!std::isfinite(s2.condition) || s2.condition > 1e13) {
    fail(ErrorCode::IllConditioned, "design condition " + fmt_num(s2.condition));
  }
  rep.coeffs.A = A;
  rep.coeffs.b = {s2.coef(3), s2.coef(4)};
  rep.coeffs.c = s2.coef(5);
  rep.coeffs.d = s2.coef(6);
  rep.coeffs.d1 = s2.coef(7);
  rep.coeffs.d2 = s2.coef(8);
  rep.P = opts.p_scale * matrix_P(A, p);
  rep.condition = s2.condition;

  std::vector<double> radii, norms;
  double u_max = 0.0;
  for (const WindowNode& w : win) {
    double acc = 0.0;
    for (int i = 0; i < nt; ++i) {
      const double e = u.at(w.j, i) - expansion_value(rep.coeffs, rep.P, point(w, i));
      acc += e * e;
      rep.residual_max = std::max(rep.residual_max, std::fabs(e));
      u_max = std::max(u_max, std::fabs(u.at(w.j, i)));
    }
    radii.push_back(w.r);
    norms.push_back(std::sqrt(2.0 * std::numbers::pi / nt * acc));
  }
  // A residual at rounding level of the samples has no decay class.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * u_max;
  if (rep.residual_max > noise) {
    try {
      rep.residual_fit = decay_fit(radii, norms);
      rep.residual_q = rep.residual_fit->q;
      if (rep.condition < 1e8) rep.residual_p = rep.residual_fit->p;
    } catch (const Error&) {
      rep.residual_fit.reset();
    }
  }
  return rep;
}

RadialFitReport fit_radial_expansion(const RadialProfile& prof, const TauParams& p, double f_inf,
                                     const RadialFitOptions& opts) {
  if (prof.r.empty()) fail(ErrorCode::WindowTooNarrow, "empty profile");
  check_window(opts.r_lo, opts.r_hi, prof.r.front(), prof.r.back());
  const double lam = calibrate_isotropic(p, f_inf);
  const bool have_w = prof.w.size() == prof.r.size() &&
                      std::fabs(prof.base_curvature - lam) <= 1e-12 * std::max(1.0, std::fabs(lam));
  const double pl = matrix_P(SymMat2::scalar(lam), p).m11;

  RadialFitReport out;
  std::vector<double> wv, lv;
  for (const WindowNode& n : window_nodes(prof.r, opts.r_lo, opts.r_hi)) {
    out.r.push_back(n.r);
    wv.push_back(have_w ? prof.w[n.j] : prof.u[n.j] - 0.5 * lam * n.r * n.r);
    lv.push_back(std::log(pl * n.r * n.r));
  }
  const Eigen::Index m = static_cast<Eigen::Index>(out.r.size());
  if (m < 4) fail(ErrorCode::WindowTooNarrow, "fewer than 4 profile nodes in the window");
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(wv.data(), m);

  const int nfix = static_cast<int>(opts.fixed_powers.size());
  auto design = [&](std::optional<double> s) {
    Eigen::MatrixXd x(m, 2 + nfix + (s ? 1 : 0));
    for (Eigen::Index t = 0; t < m; ++t) {
      x(t, 0) = 1.0;
      x(t, 1) = lv[t];
      for (int k = 0; k < nfix; ++k) x(t, 2 + k) = std::pow(out.r[t], -opts.fixed_powers[k]);
      if (s) x(t, 2 + nfix) = std::pow(out.r[t], -*s);
    }
    return x;
  };
  auto clashes = [&](double s) {
    for (double e : opts.fixed_powers) {
      if (std::fabs(s - e) < 0.05) return true;
    }
    return false;
  };

  LsqResult ls;
  if (opts.power_term) {
    auto cost = [&](double s) { return least_squares(design(s), y).rms; };
    const double ds = 0.05;
    double best_s = std::nan(""), best = std::numeric_limits<double>::infinity();
    for (double s = opts.s_min; s <= opts.s_max + 1e-12; s += ds) {
      if (clashes(s)) continue;
      const double c = cost(s);
      if (c < best) {
        best = c;
        best_s = s;
      }
    }
    if (std::isnan(best_s)) fail(ErrorCode::InvalidArgument, "empty power scan range");
    double a = std::max(opts.s_min, best_s - ds), b = std::min(opts.s_max, best_s + ds);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = cost(c1), f2 = cost(c2);
    for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
      if (f1 < f2) {
        b = c2;
        c2 = c1;
        f2 = f1;
        c1 = b - gr * (b - a);
        f1 = cost(c1);
      } else {
        a = c1;
        c1 = c2;
        f1 = f2;
        c2 = a + gr * (b - a);
        f2 = cost(c2);
      }
    }
    out.power_s = 0.5 * (a + b);
    ls = least_squares(design(out.power_s), y);
    out.power_coef = ls.coef(2 + nfix);
  } else {
    ls = least_squares(design(std::nullopt), y);
  }

  FitReport& rep = out.report;
  rep.coeffs.A = SymMat2::scalar(lam);
  rep.coeffs.c = ls.coef(0);
  rep.coeffs.d = ls.coef(1);
  rep.P = SymMat2::scalar(pl);
  rep.condition = ls.condition;
  rep.r_lo = opts.r_lo;
  rep.r_hi = opts.r_hi;
  rep.level_residual = std::fabs(level_value({lam, lam}, p) - f_inf);

  bool nonzero = false;
  for (Eigen::Index t = 0; t < m; ++t) {
    const double e = wv[t] - rep.coeffs.c - rep.coeffs.d * lv[t];
    out.remainder.push_back(e);
    rep.residual_max = std::max(rep.residual_max, std::fabs(e));
    nonzero = nonzero || e != 0.0;
  }
  if (nonzero) {
    try {
      rep.residual_fit = decay_fit(out.r, out.remainder);
      rep.residual_q = rep.residual_fit->q;
      if (rep.condition < 1e8) rep.residual_p = rep.residual_fit->p;
    } catch (const Error&) {
      rep.residual_fit.reset();
    }
  }
  return out;
}

Rate theorem_rate(double zeta, RateOrder order) {
  if (order == RateOrder::Behavior) {
    if (!(zeta > 2.0)) {
      fail(ErrorCode::OutOfRange, "behavior rate needs zeta > 2, got " + fmt_num(zeta));
    }
    if (std::fabs(zeta - 3.0) < 1e-9) return {1.0, 1.0};
    return {std::min(zeta, 3.0) - 2.0, 0.0};
  }
  if (!(zeta > 3.0)) fail(ErrorCode::OutOfRange, "next-order rate needs zeta > 3, got " + fmt_num(zeta));
  if (zeta >= 4.0 || std::fabs(zeta - 4.0) < 1e-9) return {2.0, 1.0};
  return {zeta - 2.0, 0.0};
}

}  // namespace gg
