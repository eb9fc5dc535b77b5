#include "suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "asymptotics.hpp"
#include "error.hpp"
#include "field_io.hpp"
#include "ftau.hpp"
#include "poisson.hpp"
#include "radial.hpp"

namespace gg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSamples = 1000;

using Rng = std::mt19937_64;

SuiteRow near(std::string check, double expected, double observed, double tol) {
  return {std::move(check), expected, observed, tol, std::fabs(observed - expected) <= tol};
}

SuiteRow at_least(std::string check, double bound, double observed) {
  return {std::move(check), bound, observed, 0.0, observed >= bound};
}

double uniform(Rng& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

const Branch kBranches[] = {Branch::MongeAmpere, Branch::SubQuarter, Branch::Quarter,
                            Branch::SuperQuarter, Branch::SpecialLagrangian};

double random_tau(Rng& g, Branch b) {
  const double m = 0.05;
  switch (b) {
    case Branch::MongeAmpere:
      return 0.0;
    case Branch::SubQuarter:
      return uniform(g, m, kPi / 4 - m);
    case Branch::Quarter:
      return kPi / 4;
    case Branch::SuperQuarter:
      return uniform(g, kPi / 4 + m, kPi / 2 - m);
    case Branch::SpecialLagrangian:
      return kPi / 2;
  }
  return 0.0;
}

double random_lambda(Rng& g, const TauParams& p) {
  const double lo = semiconvex_lower_bound(p);
  if (std::isfinite(lo)) return lo + std::exp(uniform(g, -2.0, 2.0));
  return uniform(g, -5.0, 5.0);
}

SymMat2 random_admissible(Rng& g, const TauParams& p) {
  Spectrum sp;
  sp.lam1 = random_lambda(g, p);
  sp.lam2 = random_lambda(g, p);
  sp.theta_e = uniform(g, 0.0, kPi);
  return sp.reconstruct();
}

void p_identity(Rng& g, SuiteResult& out) {
  double worst = 0.0;
  for (int n = 0; n < kSamples; ++n) {
    const TauParams p = tau_params(random_tau(g, kBranches[n % 5]));
    const SymMat2 a = random_admissible(g, p);
    const Mat2 m = multiply(matrix_P(a, p), df_mat(a, p));
    const double e = std::max({std::fabs(2 * m[0] - 1), std::fabs(2 * m[1]), std::fabs(2 * m[2]),
                               std::fabs(2 * m[3] - 1)});
    worst = std::max(worst, e);
  }
  out.rows.push_back(near("p-identity", 0.0, worst, 1e-10));
}

void unified_derivative(Rng& g, SuiteResult& out) {
  for (Branch b : kBranches) {
    double unified = 0.0, fd = 0.0;
    for (int n = 0; n < kSamples; ++n) {
      const TauParams p = tau_params(random_tau(g, b));
      const double lam = random_lambda(g, p);
      const double d = df_scalar(lam, p);
      unified = std::max(unified, std::fabs(df_scalar_branchwise(lam, p) - d) / std::fabs(d));
      const double h = 1e-6 * std::max(1.0, std::fabs(lam));
      const double num = (f_tau_term(lam + h, p) - f_tau_term(lam - h, p)) / (2 * h);
      fd = std::max(fd, std::fabs(num - d) / std::fabs(d));
    }
    const std::string name = std::string("unified-derivative:") + branch_name(b);
    out.rows.push_back(near(name + ":branchwise", 0.0, unified, 1e-10));
    out.rows.push_back(near(name + ":finite-difference", 0.0, fd, 1e-6));
  }
}

void arctan_identity(Rng& g, SuiteResult& out) {
  double super = 0.0;
  for (int n = 0; n < kSamples; ++n) {
    const TauParams p = tau_params(random_tau(g, Branch::SuperQuarter));
    PointJet u;
    u.x = {uniform(g, -10, 10), uniform(g, -10, 10)};
    u.value = uniform(g, -10, 10);
    u.grad = {uniform(g, -10, 10), uniform(g, -10, 10)};
    u.hess = random_admissible(g, p);
    const PointJet v = reduce_superquarter(u, p);
    const Spectrum sv = eigs(v.hess);
    const double phase = std::atan(sv.lam1) + std::atan(sv.lam2);
    super = std::max(super, std::fabs(phase - superquarter_phase(f_tau(u.hess, p), p)));
  }
  out.rows.push_back(near("arctan-identity:superquarter", 0.0, super, 1e-12));

  const TauParams spl = tau_params(kPi / 2);
  double alg = 0.0;
  for (int n = 0; n < kSamples; ++n) {
    const SymMat2 m = random_admissible(g, spl);
    const double f = f_tau(m, spl);
    const double scale = 1.0 + std::fabs(m.trace()) + std::fabs(m.det());
    alg = std::max(alg, std::fabs(algebraic_residual_spl(m, f)) / scale);
  }
  out.rows.push_back(near("arctan-identity:spl-algebraic", 0.0, alg, 1e-12));
}

void poisson_closed_forms(SuiteResult& out) {
  const AnnulusGrid grid{2.0, 200.0, 512, 64};
  struct Case {
    const char* name;
    std::function<double(double, double)> g;
    double p, q;
  };
  const Case cases[] = {
      {"r^-3", [](double r, double) { return std::pow(r, -3.0); }, 1.0, 0.0},
      {"r^-2", [](double r, double) { return std::pow(r, -2.0); }, 0.0, 2.0},
      {"r^-4cos", [](double r, double t) { return std::pow(r, -4.0) * std::cos(t); }, 2.0, 0.0},
  };
  for (const Case& c : cases) {
    const std::string name = std::string("poisson-closed-forms:") + c.name;
    const ScalarField g = sample_field(grid, c.g);
    const PoissonSolution sol = solve_exterior_poisson(g);
    const DecayFit fit = measure_decay_class(grid.radii(), circle_l2_norms(sol.v));
    out.rows.push_back(near(name + ":residual", 0.0, laplacian_residual(sol.v, g), 1e-4));
    out.rows.push_back(near(name + ":p", c.p, fit.p, 0.1));
    out.rows.push_back(near(name + ":q", c.q, fit.q, 0.1));
  }
}

void radial_oracle(SuiteResult& out) {
  const TauParams ma = tau_params(0.0);
  const RadialRhs rhs{0.0, [](double r) { return 0.5 * std::log1p(std::pow(r, -4.0)); }};
  const RadialProfile prof = integrate_radial(ma, rhs, 1.0, 0.5, 1.0, 1e3, 10000);
  const std::vector<double> du = ma_radial_oracle([](double s) { return 1.0 + std::pow(s, -4.0); },
                                                  1.0, 1.0, prof.r);
  double err = 0.0;
  for (std::size_t j = 0; j < du.size(); ++j) err = std::max(err, std::fabs(prof.du[j] - du[j]) / du[j]);
  out.rows.push_back(near("radial-oracle:relative-error", 0.0, err, 1e-7));

  double e[2];
  const int steps[2] = {50, 100};
  for (int k = 0; k < 2; ++k) {
    const RadialProfile pk = integrate_radial(ma, rhs, 1.0, 0.5, 1.0, 10.0, steps[k]);
    const std::vector<double> dev = ma_radial_oracle_deviation(
        [](double s) { return std::pow(s, -4.0); }, 1.0, 1.0, pk.r);
    e[k] = 0.0;
    for (std::size_t j = 0; j < dev.size(); ++j) e[k] = std::max(e[k], std::fabs(pk.dw[j] - dev[j]));
  }
  out.rows.push_back(at_least("radial-oracle:rk4-order", 3.8, std::log2(e[0] / e[1])));
}

// Radial profile restricted to log-spaced nodes on [lo, hi] as a 2-D field.
ScalarField profile_field(const RadialProfile& prof, double lo, double hi, int n_r, int n_theta) {
  int j_lo = 0, j_hi = static_cast<int>(prof.r.size()) - 1;
  while (j_hi > 0 && prof.r[j_hi] > hi * (1 + 1e-12)) --j_hi;
  while (j_lo < j_hi && prof.r[j_lo] < lo * (1 - 1e-12)) ++j_lo;
  const int stride = (j_hi - j_lo) / (n_r - 1);
  if (stride < 1) fail(ErrorCode::GridTooCoarse, "profile has too few nodes on the window");
  j_lo = j_hi - stride * (n_r - 1);
  AnnulusGrid grid{prof.r[j_lo], prof.r[j_hi], n_r, n_theta};
  ScalarField f{grid, std::vector<double>(static_cast<std::size_t>(n_r) * n_theta)};
  for (int j = 0; j < n_r; ++j) {
    for (int i = 0; i < n_theta; ++i) f.at(j, i) = prof.u[j_lo + j * stride];
  }
  return f;
}

void theorem_rates(SuiteResult& out) {
  for (double tau : {0.0, kPi / 2}) {
    const TauParams p = tau_params(tau);
    const double f_inf = tau == 0.0 ? 0.0 : kPi / 2;
    for (double zeta : {2.3, 2.5, 3.5}) {
      std::ostringstream nm;
      nm << "theorem-rates:tau=" << (tau == 0.0 ? "0" : "pi/2") << ":zeta=" << zeta;
      const std::string name = nm.str();
      const bool next = zeta > 3.0;
      const double r_max = next ? 1e3 : 1e6;
      const RadialProfile prof =
          integrate_radial(p, PerturbedRHS{f_inf, 0.5, zeta}, 1.0, 0.5, 1.0, r_max, 20000);
      RadialFitOptions ro;
      ro.r_lo = 10.0;
      ro.r_hi = r_max;
      const RadialFitReport rf = fit_radial_expansion(prof, p, f_inf, ro);
      const DecayFit fit = rf.report.residual_fit.value_or(DecayFit{});
      const Rate behavior = theorem_rate(zeta, RateOrder::Behavior);
      out.rows.push_back(near(name + (next ? ":behavior-p" : ":p"), behavior.p, fit.p, 0.1));
      if (next) {
        out.rows.push_back(near(name + ":next-p", theorem_rate(zeta, RateOrder::Next).p, fit.p, 0.15));
      } else {
        out.rows.push_back(near(name + ":q", behavior.q, fit.q_raw, 0.15));
      }

      FitOptions fo;
      fo.r_lo = 100.0;
      fo.r_hi = 1e3;
      const FitReport two_d = fit_expansion(profile_field(prof, 10.0, 1e3, 64, 32), p, f_inf, fo);
      out.rows.push_back(near(name + ":d1", 0.0, two_d.coeffs.d1, 1e-6));
      out.rows.push_back(near(name + ":d2", 0.0, two_d.coeffs.d2, 1e-6));
    }
  }
}

void zeta2_optimality(SuiteResult& out) {
  const Counterexample ce = counterexample_zeta2(1.0, 1e6);
  out.rows.push_back(near("zeta2-optimality:q", 2.0, ce.fit.q_raw, 0.1));
  out.rows.push_back(near("zeta2-optimality:log2-coefficient", 0.5, ce.log2_coef, 0.025));
}

void manufactured_roundtrip(SuiteResult& out) {
  const TauParams spl = tau_params(kPi / 2);
  AsymptoticCoefficients cf;
  cf.A = SymMat2::diag(1.0, 2.0);
  cf.c = 1.0;
  cf.d = 0.3;
  cf.d1 = 0.1;
  cf.d2 = -0.2;
  const ManufacturedRhs m = manufacture_rhs(cf, spl, AnnulusGrid{10.0, 1e3, 64, 32});
  out.rows.push_back(at_least("manufactured-roundtrip:k1", 2.9, m.decay ? m.decay->p : std::nan("")));

  const ScalarField u = sample_expansion(cf, spl, AnnulusGrid{100.0, 1e4, 64, 32});
  FitOptions fo;
  fo.r_lo = 100.0;
  fo.r_hi = 1e4;
  const FitReport r = fit_expansion(u, spl, m.f_inf, fo);
  const AsymptoticCoefficients& k = r.coeffs;
  auto rel = [&](const char* what, double truth, double got) {
    const double tol = truth == 0.0 ? 1e-3 : 1e-3 * std::fabs(truth);
    out.rows.push_back(near(std::string("manufactured-roundtrip:") + what, truth, got, tol));
  };
  rel("A11", cf.A.m11, k.A.m11);
  rel("A12", cf.A.m12, k.A.m12);
  rel("A22", cf.A.m22, k.A.m22);
  rel("b1", cf.b.x, k.b.x);
  rel("b2", cf.b.y, k.b.y);
  rel("c", cf.c, k.c);
  rel("d", cf.d, k.d);
  rel("d1", cf.d1, k.d1);
  rel("d2", cf.d2, k.d2);
}

void d_perturbation_rate(SuiteResult& out) {
  AsymptoticCoefficients cf;
  cf.d = 0.3;
  const ManufacturedRhs m = manufacture_rhs(cf, tau_params(kPi / 2), AnnulusGrid{10.0, 1e3, 64, 32});
  out.rows.push_back(near("d-perturbation-rate:k1", 4.0, m.decay ? m.decay->p : std::nan(""), 0.1));
}

}  // namespace

bool SuiteResult::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.pass; });
}

const std::vector<std::string>& suite_groups() {
  static const std::vector<std::string> g = {
      "p-identity",          "unified-derivative", "arctan-identity",        "poisson-closed-forms",
      "radial-oracle",       "theorem-rates",      "zeta2-optimality",       "manufactured-roundtrip",
      "d-perturbation-rate",
  };
  return g;
}

void run_suite_group(const std::string& group, std::uint64_t seed, SuiteResult& out) {
  const auto& groups = suite_groups();
  const auto it = std::find(groups.begin(), groups.end(), group);
  if (it == groups.end()) fail(ErrorCode::InvalidArgument, "unknown check group '" + group + "'");
  std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(it - groups.begin())};
  Rng g(sq);
  try {
    if (group == "p-identity") p_identity(g, out);
    else if (group == "unified-derivative") unified_derivative(g, out);
    else if (group == "arctan-identity") arctan_identity(g, out);
    else if (group == "poisson-closed-forms") poisson_closed_forms(out);
    else if (group == "radial-oracle") radial_oracle(out);
    else if (group == "theorem-rates") theorem_rates(out);
    else if (group == "zeta2-optimality") zeta2_optimality(out);
    else if (group == "manufactured-roundtrip") manufactured_roundtrip(out);
    else d_perturbation_rate(out);
  } catch (const Error& e) {
    out.rows.push_back({group + ":" + error_name(e.code()), 0.0, std::nan(""), 0.0, false});
  }
}

SuiteResult run_suite(std::uint64_t seed, const std::string& only) {
  SuiteResult out;
  if (!only.empty()) {
    run_suite_group(only, seed, out);
    return out;
  }
  for (const std::string& g : suite_groups()) run_suite_group(g, seed, out);
  return out;
}

std::string suite_csv(const SuiteResult& r) {
  std::string s = "check,expected,observed,tolerance,pass\n";
  for (const SuiteRow& row : r.rows) {
    s += row.check + ',' + fmt_exact(row.expected) + ',' + fmt_exact(row.observed) + ',' +
         fmt_exact(row.tolerance) + ',' + (row.pass ? "true" : "false") + '\n';
  }
  return s;
}

}  // namespace gg
