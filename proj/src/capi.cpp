#include "gradgraph/gradgraph.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

#include "asymptotics.hpp"
#include "error.hpp"
#include "field_io.hpp"
#include "ftau.hpp"
#include "poisson.hpp"
#include "radial.hpp"
#include "suite.hpp"

struct gg_field {
  gg::ScalarField f;
};

struct gg_modes {
  gg::FourierModes m;
};

struct gg_profile {
  gg::RadialProfile p;
};

struct gg_suite {
  gg::SuiteResult r;
  std::string csv;
};

namespace {

thread_local std::string last_error;

gg_status to_status(gg::ErrorCode c) { return static_cast<gg_status>(static_cast<int>(c) + 1); }

template <class Fn>
gg_status guard(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return GG_OK;
  } catch (const gg::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    last_error = std::string("INTERNAL: ") + e.what();
    return GG_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) gg::fail(gg::ErrorCode::InvalidArgument, what);
}

// "-" is standard output.
template <class Fn>
void with_output(const char* path, Fn&& fn) {
  if (std::strcmp(path, "-") == 0) {
    fn(std::cout);
    std::cout.flush();
    if (!std::cout) gg::fail(gg::ErrorCode::IoError, "write to standard output failed");
    return;
  }
  std::ofstream os(path);
  if (!os) gg::fail(gg::ErrorCode::IoError, std::string("cannot write ") + path);
  fn(os);
  os.flush();
  if (!os) gg::fail(gg::ErrorCode::IoError, std::string("write failed: ") + path);
}

gg::SymMat2 sym(const double a[3]) { return {a[0], a[1], a[2]}; }

void put(const gg::SymMat2& m, double out[3]) {
  out[0] = m.m11;
  out[1] = m.m12;
  out[2] = m.m22;
}

gg::AnnulusGrid grid_of(const gg_grid* g) {
  require(g != nullptr, "grid is null");
  gg::AnnulusGrid out{g->r_min, g->r_max, g->n_r, g->n_theta};
  out.validate();
  return out;
}

void put(const gg::DecayFit& d, gg_decay* out) {
  if (!out) return;
  *out = {d.c0, d.p, d.q, d.p_raw, d.q_raw, d.q_snapped ? 1 : 0, d.sign_change ? 1 : 0};
}

gg::AsymptoticCoefficients coeffs_of(const gg_coefficients* c) {
  require(c != nullptr, "coefficients are null");
  gg::AsymptoticCoefficients out;
  out.A = sym(c->A);
  out.b = {c->b[0], c->b[1]};
  out.c = c->c;
  out.d = c->d;
  out.d1 = c->d1;
  out.d2 = c->d2;
  return out;
}

void put(const gg::AsymptoticCoefficients& c, gg_coefficients* out) {
  put(c.A, out->A);
  out->b[0] = c.b.x;
  out->b[1] = c.b.y;
  out->c = c.c;
  out->d = c.d;
  out->d1 = c.d1;
  out->d2 = c.d2;
}

void put(const gg::FitReport& r, gg_fit_report* out) {
  require(out != nullptr, "report is null");
  put(r.coeffs, &out->coeffs);
  put(r.P, out->P);
  out->has_residual_p = r.residual_p ? 1 : 0;
  out->residual_p = r.residual_p.value_or(std::nan(""));
  out->residual_q = r.residual_q;
  out->condition = r.condition;
  out->r_lo = r.r_lo;
  out->r_hi = r.r_hi;
  out->level_residual = r.level_residual;
  out->projected = r.projected ? 1 : 0;
}

gg::FitReport report_of(const gg_fit_report* r) {
  require(r != nullptr, "report is null");
  gg::FitReport out;
  out.coeffs = coeffs_of(&r->coeffs);
  out.P = sym(r->P);
  if (r->has_residual_p) out.residual_p = r->residual_p;
  out.residual_q = r->residual_q;
  out.condition = r->condition;
  out.r_lo = r->r_lo;
  out.r_hi = r->r_hi;
  out.level_residual = r->level_residual;
  out.projected = r->projected != 0;
  return out;
}

void put_calibration(const gg::TauParams& p, double l1, double l2, gg_calibration* out) {
  require(out != nullptr, "output is null");
  const gg::SymMat2 a = gg::SymMat2::diag(l1, l2);
  out->lam1 = l1;
  out->lam2 = l2;
  put(a, out->A);
  put(gg::matrix_P(a, p), out->P);
  const gg::AdmissibleRange r = gg::attainable_range(p);
  out->range_lo = r.lo;
  out->range_hi = r.hi;
}

gg::FitOptions fit_options_of(const gg_fit_options* o) {
  gg::FitOptions out;
  if (o) {
    out.r_lo = o->r_lo;
    out.r_hi = o->r_hi;
    out.p_scale = o->p_scale;
  }
  return out;
}

gg_status integrate(const gg_radial_problem* pr, const gg::RadialRhs* rhs, gg_profile** out) {
  if (out) *out = nullptr;
  gg::RadialProfile partial;
  bool have_partial = false;
  const gg_status s = guard([&] {
    require(pr != nullptr && out != nullptr, "problem or output is null");
    const gg::TauParams p = gg::tau_params(pr->tau);
    try {
      gg::RadialProfile prof =
          rhs ? gg::integrate_radial(p, *rhs, pr->r0, pr->u0, pr->du0, pr->r_max, pr->n_steps)
              : gg::integrate_radial(p, gg::PerturbedRHS{pr->f_inf, pr->amp, pr->zeta}, pr->r0,
                                     pr->u0, pr->du0, pr->r_max, pr->n_steps);
      *out = new gg_profile{std::move(prof)};
    } catch (const gg::RadialIntegrationError& e) {
      partial = e.partial();
      have_partial = true;
      throw;
    }
  });
  if (have_partial && out) *out = new gg_profile{std::move(partial)};
  return s;
}

}  // namespace

extern "C" {

const char* gg_status_name(gg_status s) {
  if (s == GG_OK) return "OK";
  if (s == GG_INTERNAL) return "INTERNAL";
  if (s > GG_OK && s < GG_INTERNAL) return gg::error_name(static_cast<gg::ErrorCode>(s - 1));
  return "UNKNOWN";
}

const char* gg_last_error(void) { return last_error.c_str(); }

const char* gg_version(void) { return "0.1.0"; }

gg_status gg_tau_info_get(double tau, gg_tau_info* out) {
  return guard([&] {
    require(out != nullptr, "output is null");
    const gg::TauParams p = gg::tau_params(tau);
    const gg::AdmissibleRange r = gg::attainable_range(p);
    *out = {p.tau, p.a, p.b_coef, static_cast<int>(p.branch), gg::branch_name(p.branch),
            gg::semiconvex_lower_bound(p), r.lo, r.hi};
  });
}

gg_status gg_f_tau(double tau, double lam1, double lam2, double* out) {
  return guard([&] {
    require(out != nullptr, "output is null");
    *out = gg::f_tau(gg::Eigenpair{lam1, lam2}, gg::tau_params(tau));
  });
}

gg_status gg_df_scalar(double tau, double lam, double* out) {
  return guard([&] {
    require(out != nullptr, "output is null");
    const gg::TauParams p = gg::tau_params(tau);
    gg::check_admissible(lam, p);
    *out = gg::df_scalar(lam, p);
  });
}

gg_status gg_df_mat(double tau, const double a[3], double out[3]) {
  return guard([&] {
    require(a != nullptr && out != nullptr, "matrix is null");
    put(gg::df_mat(sym(a), gg::tau_params(tau)), out);
  });
}

gg_status gg_matrix_p(double tau, const double a[3], double out[3]) {
  return guard([&] {
    require(a != nullptr && out != nullptr, "matrix is null");
    put(gg::matrix_P(sym(a), gg::tau_params(tau)), out);
  });
}

gg_status gg_calibrate(double tau, double f_inf, double lam1, gg_calibration* out) {
  return guard([&] {
    const gg::TauParams p = gg::tau_params(tau);
    put_calibration(p, lam1, gg::calibrate_diagonal(p, f_inf, lam1), out);
  });
}

gg_status gg_calibrate_isotropic(double tau, double f_inf, gg_calibration* out) {
  return guard([&] {
    const gg::TauParams p = gg::tau_params(tau);
    const double l = gg::calibrate_isotropic(p, f_inf);
    put_calibration(p, l, l, out);
  });
}

gg_status gg_field_create(const gg_grid* grid, const double* values, gg_field** out) {
  return guard([&] {
    require(values != nullptr && out != nullptr, "values or output is null");
    const gg::AnnulusGrid g = grid_of(grid);
    const std::size_t n = static_cast<std::size_t>(g.n_r) * g.n_theta;
    *out = new gg_field{gg::ScalarField{g, std::vector<double>(values, values + n)}};
  });
}

gg_status gg_field_sample(const gg_grid* grid, gg_field_fn fn, void* user, gg_field** out) {
  return guard([&] {
    require(fn != nullptr && out != nullptr, "callback or output is null");
    const gg::AnnulusGrid g = grid_of(grid);
    *out = new gg_field{gg::sample_field(g, [&](double r, double t) { return fn(r, t, user); })};
  });
}

gg_status gg_field_read_csv(const char* path, gg_field** out) {
  return guard([&] {
    require(path != nullptr && out != nullptr, "path or output is null");
    std::ifstream is(path);
    if (!is) gg::fail(gg::ErrorCode::IoError, std::string("cannot open ") + path);
    *out = new gg_field{gg::read_field_csv(is)};
  });
}

gg_status gg_field_write_csv(const gg_field* f, const char* path) {
  return guard([&] {
    require(f != nullptr && path != nullptr, "field or path is null");
    with_output(path, [&](std::ostream& os) { gg::write_field_csv(os, f->f); });
  });
}

gg_status gg_field_grid(const gg_field* f, gg_grid* out) {
  return guard([&] {
    require(f != nullptr && out != nullptr, "field or output is null");
    *out = {f->f.grid.r_min, f->f.grid.r_max, f->f.grid.n_r, f->f.grid.n_theta};
  });
}

const double* gg_field_values(const gg_field* f, size_t* count) {
  if (!f) return nullptr;
  if (count) *count = f->f.values.size();
  return f->f.values.data();
}

void gg_field_destroy(gg_field* f) { delete f; }

gg_status gg_decay_fit(const double* r, const double* v, size_t n, gg_decay* out) {
  return guard([&] {
    require(r != nullptr && v != nullptr && out != nullptr, "samples or output is null");
    put(gg::decay_fit(std::vector<double>(r, r + n), std::vector<double>(v, v + n)), out);
  });
}

gg_status gg_field_decay(const gg_field* f, gg_decay* out) {
  return guard([&] {
    require(f != nullptr && out != nullptr, "field or output is null");
    put(gg::measure_decay_class(f->f.grid.radii(), gg::circle_l2_norms(f->f)), out);
  });
}

gg_status gg_fourier_decompose(const gg_field* f, int k_max, gg_modes** out) {
  return guard([&] {
    require(f != nullptr && out != nullptr, "field or output is null");
    *out = new gg_modes{gg::fourier_decompose(f->f, k_max)};
  });
}

int gg_modes_k_max(const gg_modes* m) { return m ? m->m.k_max : -1; }

const double* gg_modes_coefficient(const gg_modes* m, int k, int sin_part, size_t* count) {
  if (!m || k < 0 || k > m->m.k_max || (k == 0 && sin_part)) return nullptr;
  const std::vector<double>& c = m->m.mode(k, sin_part ? 2 : 1);
  if (count) *count = c.size();
  return c.data();
}

gg_status gg_modes_assemble(const gg_modes* m, gg_field** out) {
  return guard([&] {
    require(m != nullptr && out != nullptr, "modes or output is null");
    *out = new gg_field{gg::assemble(m->m)};
  });
}

void gg_modes_destroy(gg_modes* m) { delete m; }

void gg_poisson_options_default(gg_poisson_options* o) {
  if (!o) return;
  const gg::PoissonOptions d;
  *o = {d.k_max, d.mode.reference_radius, 0, 0.0, 0.0};
}

gg_status gg_poisson_solve(const gg_field* g, const gg_poisson_options* opts, gg_field** v,
                           gg_poisson_info* info) {
  return guard([&] {
    require(g != nullptr && v != nullptr, "source or output is null");
    gg::PoissonOptions o;
    if (opts) {
      o.k_max = opts->k_max;
      o.mode.reference_radius = opts->reference_radius;
      if (opts->has_decay) o.decay = gg::DecayClass{opts->k1, opts->k2};
    }
    gg::PoissonSolution sol = gg::solve_exterior_poisson(g->f, o);
    if (info) {
      info->source_k1 = sol.source_class.k1;
      info->source_k2 = sol.source_class.k2;
      info->modes_solved = sol.modes_solved;
      info->residual = gg::laplacian_residual(sol.v, g->f);
    }
    *v = new gg_field{std::move(sol.v)};
  });
}

gg_status gg_laplacian_residual(const gg_field* v, const gg_field* g, double* out) {
  return guard([&] {
    require(v != nullptr && g != nullptr && out != nullptr, "argument is null");
    *out = gg::laplacian_residual(v->f, g->f);
  });
}

gg_status gg_radial_integrate(const gg_radial_problem* pr, gg_profile** out) {
  return integrate(pr, nullptr, out);
}

gg_status gg_radial_integrate_fn(const gg_radial_problem* pr, gg_radial_fn delta, void* user,
                                 gg_profile** out) {
  if (!delta) return guard([] { require(false, "callback is null"); });
  const gg::RadialRhs rhs{pr ? pr->f_inf : 0.0, [delta, user](double r) { return delta(r, user); }};
  return integrate(pr, &rhs, out);
}

gg_status gg_counterexample_zeta2(double c, double r_max, gg_profile** out, gg_decay* fit,
                                  double* log2_coef) {
  return guard([&] {
    require(out != nullptr, "output is null");
    gg::Counterexample ce = gg::counterexample_zeta2(c, r_max);
    put(ce.fit, fit);
    if (log2_coef) *log2_coef = ce.log2_coef;
    *out = new gg_profile{std::move(ce.profile)};
  });
}

gg_status gg_ma_radial_oracle(gg_radial_fn psi_minus_one, void* user, double r0, double du0,
                              const double* r, size_t n, double* du) {
  return guard([&] {
    require(psi_minus_one != nullptr && r != nullptr && du != nullptr, "argument is null");
    auto pm1 = [&](double s) { return psi_minus_one(s, user); };
    const std::vector<double> rr(r, r + n);
    const std::vector<double> dev = gg::ma_radial_oracle_deviation(pm1, r0, du0, rr);
    for (std::size_t j = 0; j < n; ++j) du[j] = rr[j] + dev[j];
  });
}

size_t gg_profile_size(const gg_profile* p) { return p ? p->p.r.size() : 0; }

const double* gg_profile_data(const gg_profile* p, gg_profile_column c) {
  if (!p) return nullptr;
  switch (c) {
    case GG_R:
      return p->p.r.data();
    case GG_U:
      return p->p.u.data();
    case GG_DU:
      return p->p.du.data();
    case GG_DDU:
      return p->p.ddu.data();
    case GG_W:
      return p->p.w.data();
    case GG_DW:
      return p->p.dw.data();
  }
  return nullptr;
}

double gg_profile_base_curvature(const gg_profile* p) { return p ? p->p.base_curvature : std::nan(""); }

gg_status gg_profile_write_csv(const gg_profile* p, const char* path) {
  return guard([&] {
    require(p != nullptr && path != nullptr, "profile or path is null");
    with_output(path, [&](std::ostream& os) { gg::write_profile_csv(os, p->p); });
  });
}

void gg_profile_destroy(gg_profile* p) { delete p; }

void gg_fit_options_default(gg_fit_options* o) {
  if (!o) return;
  const gg::FitOptions d;
  *o = {d.r_lo, d.r_hi, d.p_scale};
}

gg_status gg_expansion_value(const gg_coefficients* cf, const double P[3], double x1, double x2,
                             double* out) {
  return guard([&] {
    require(P != nullptr && out != nullptr, "argument is null");
    *out = gg::expansion_value(coeffs_of(cf), sym(P), {x1, x2});
  });
}

gg_status gg_expansion_hessian(const gg_coefficients* cf, const double P[3], double x1, double x2,
                               double out[3]) {
  return guard([&] {
    require(P != nullptr && out != nullptr, "argument is null");
    put(gg::expansion_hessian(coeffs_of(cf), sym(P), {x1, x2}), out);
  });
}

gg_status gg_manufacture(const gg_coefficients* cf, double tau, const gg_grid* grid, gg_field** f,
                         double* f_inf, gg_decay* decay) {
  return guard([&] {
    require(f != nullptr, "output is null");
    gg::ManufacturedRhs m = gg::manufacture_rhs(coeffs_of(cf), gg::tau_params(tau), grid_of(grid));
    if (f_inf) *f_inf = m.f_inf;
    if (decay) {
      if (m.decay) {
        put(*m.decay, decay);
      } else {
        const double nan = std::nan("");
        *decay = {nan, nan, nan, nan, nan, 0, 0};
      }
    }
    *f = new gg_field{std::move(m.f)};
  });
}

gg_status gg_sample_expansion(const gg_coefficients* cf, double tau, const gg_grid* grid,
                              double p_scale, gg_field** out) {
  return guard([&] {
    require(out != nullptr, "output is null");
    *out = new gg_field{gg::sample_expansion(coeffs_of(cf), gg::tau_params(tau), grid_of(grid), p_scale)};
  });
}

gg_status gg_fit_expansion(const gg_field* u, double tau, double f_inf, const gg_fit_options* opts,
                           gg_fit_report* out) {
  return guard([&] {
    require(u != nullptr, "field is null");
    put(gg::fit_expansion(u->f, gg::tau_params(tau), f_inf, fit_options_of(opts)), out);
  });
}

gg_status gg_fit_radial(const gg_profile* p, double tau, double f_inf, const gg_fit_options* opts,
                        gg_fit_report* out) {
  return guard([&] {
    require(p != nullptr, "profile is null");
    gg::RadialFitOptions o;
    if (opts) {
      o.r_lo = opts->r_lo;
      o.r_hi = opts->r_hi;
    }
    put(gg::fit_radial_expansion(p->p, gg::tau_params(tau), f_inf, o).report, out);
  });
}

gg_status gg_fit_report_json(const gg_fit_report* r, char* buf, size_t cap, size_t* len) {
  return guard([&] {
    const std::string s = gg::fit_report_json(report_of(r));
    if (len) *len = s.size();
    if (buf && cap > 0) {
      const std::size_t n = std::min(cap - 1, s.size());
      std::memcpy(buf, s.data(), n);
      buf[n] = '\0';
    }
  });
}

gg_status gg_theorem_rate(double zeta, int order, double* p, double* q) {
  return guard([&] {
    require(order == 0 || order == 1, "order must be 0 (behavior) or 1 (next)");
    require(p != nullptr && q != nullptr, "output is null");
    const gg::Rate r = gg::theorem_rate(zeta, order == 0 ? gg::RateOrder::Behavior : gg::RateOrder::Next);
    *p = r.p;
    *q = r.q;
  });
}

size_t gg_suite_group_count(void) { return gg::suite_groups().size(); }

const char* gg_suite_group_name(size_t i) {
  const auto& g = gg::suite_groups();
  return i < g.size() ? g[i].c_str() : nullptr;
}

gg_status gg_suite_run(uint64_t seed, const char* only, gg_suite** out) {
  return guard([&] {
    require(out != nullptr, "output is null");
    gg::SuiteResult r = gg::run_suite(seed, only ? only : "");
    std::string csv = gg::suite_csv(r);
    *out = new gg_suite{std::move(r), std::move(csv)};
  });
}

size_t gg_suite_size(const gg_suite* s) { return s ? s->r.rows.size() : 0; }

gg_status gg_suite_row_get(const gg_suite* s, size_t i, gg_suite_row* out) {
  return guard([&] {
    require(s != nullptr && out != nullptr, "suite or output is null");
    if (i >= s->r.rows.size()) gg::fail(gg::ErrorCode::OutOfRange, "row " + std::to_string(i));
    const gg::SuiteRow& r = s->r.rows[i];
    *out = {r.check.c_str(), r.expected, r.observed, r.tolerance, r.pass ? 1 : 0};
  });
}

int gg_suite_pass(const gg_suite* s) { return s && s->r.pass() ? 1 : 0; }

const char* gg_suite_csv(const gg_suite* s) { return s ? s->csv.c_str() : nullptr; }

void gg_suite_destroy(gg_suite* s) { delete s; }

}  // extern "C"
