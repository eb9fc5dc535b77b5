#ifndef GRADGRAPH_H
#define GRADGRAPH_H

#include <stddef.h>
#include <stdint.h>

#if defined(GG_BUILDING_LIBRARY)
#define GG_API __attribute__((visibility("default")))
#else
#define GG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gg_status {
  GG_OK = 0,
  GG_OUT_OF_RANGE,
  GG_DOMAIN_VIOLATION,
  GG_NOT_POSITIVE_DEFINITE,
  GG_NO_ROOT,
  GG_INADMISSIBLE_INPUT,
  GG_ALIASING,
  GG_TAIL_DIVERGENT,
  GG_GRID_TOO_COARSE,
  GG_ILL_CONDITIONED,
  GG_NEGATIVE_RADICAND,
  GG_STEP_TOO_LARGE,
  GG_SINGULAR_P,
  GG_WINDOW_TOO_NARROW,
  GG_INVALID_ARGUMENT,
  GG_IO_ERROR,
  GG_INTERNAL
} gg_status;

/* "OK", "OUT_OF_RANGE", ... */
GG_API const char* gg_status_name(gg_status s);
/* Message of the last failed call on this thread ("" after success). */
GG_API const char* gg_last_error(void);
GG_API const char* gg_version(void);

/* Branch of the operator family: 0 MA, 1 SUBQUARTER, 2 QUARTER,
 * 3 SUPERQUARTER, 4 SPL. */
typedef struct gg_tau_info {
  double tau;
  double a;
  double b;
  int branch;
  const char* branch_name;
  double semiconvex_bound;
  double range_lo;
  double range_hi;
} gg_tau_info;

GG_API gg_status gg_tau_info_get(double tau, gg_tau_info* out);

/* Symmetric 2x2 matrices are passed as {m11, m12, m22}. */
GG_API gg_status gg_f_tau(double tau, double lam1, double lam2, double* out);
GG_API gg_status gg_df_scalar(double tau, double lam, double* out);
GG_API gg_status gg_df_mat(double tau, const double a[3], double out[3]);
GG_API gg_status gg_matrix_p(double tau, const double a[3], double out[3]);

typedef struct gg_calibration {
  double lam1;
  double lam2;
  double A[3];
  double P[3];
  double range_lo;
  double range_hi;
} gg_calibration;

/* A = diag(lam1, lam2) with F_tau(lam1, lam2) = f_inf. */
GG_API gg_status gg_calibrate(double tau, double f_inf, double lam1, gg_calibration* out);
GG_API gg_status gg_calibrate_isotropic(double tau, double f_inf, gg_calibration* out);

/* ---- fields on log-spaced annular grids ---- */

typedef struct gg_grid {
  double r_min;
  double r_max;
  int n_r;
  int n_theta;
} gg_grid;

typedef struct gg_field gg_field;
typedef double (*gg_field_fn)(double r, double theta, void* user);

/* values[j * n_theta + i] at radius j, angle i. */
GG_API gg_status gg_field_create(const gg_grid* grid, const double* values, gg_field** out);
GG_API gg_status gg_field_sample(const gg_grid* grid, gg_field_fn fn, void* user, gg_field** out);
GG_API gg_status gg_field_read_csv(const char* path, gg_field** out);
/* path "-" writes to standard output. */
GG_API gg_status gg_field_write_csv(const gg_field* f, const char* path);
GG_API gg_status gg_field_grid(const gg_field* f, gg_grid* out);
GG_API const double* gg_field_values(const gg_field* f, size_t* count);
GG_API void gg_field_destroy(gg_field* f);

typedef struct gg_decay {
  double c0;
  double p;
  double q;
  double p_raw;
  double q_raw;
  int q_snapped;
  int sign_change;
} gg_decay;

/* Decay of sampled values: ln|v| ~ c0 - p ln r + q ln ln r. */
GG_API gg_status gg_decay_fit(const double* r, const double* v, size_t n, gg_decay* out);
/* Decay class of the circle L2 norms of a field (half-integer exponents). */
GG_API gg_status gg_field_decay(const gg_field* f, gg_decay* out);

/* ---- exterior Poisson ---- */

typedef struct gg_modes gg_modes;

GG_API gg_status gg_fourier_decompose(const gg_field* f, int k_max, gg_modes** out);
GG_API int gg_modes_k_max(const gg_modes* m);
/* Radial coefficient of cos k theta, or sin k theta when sin_part is 1 (k >= 1). */
GG_API const double* gg_modes_coefficient(const gg_modes* m, int k, int sin_part, size_t* count);
GG_API gg_status gg_modes_assemble(const gg_modes* m, gg_field** out);
GG_API void gg_modes_destroy(gg_modes* m);

typedef struct gg_poisson_options {
  int k_max;
  double reference_radius;
  /* Source decay class; measured from the data when has_decay is 0. */
  int has_decay;
  double k1;
  double k2;
} gg_poisson_options;

typedef struct gg_poisson_info {
  double source_k1;
  double source_k2;
  int modes_solved;
  double residual;
} gg_poisson_info;

GG_API void gg_poisson_options_default(gg_poisson_options* o);
/* v with Laplacian g on the annulus and the decay prescribed by the source. */
GG_API gg_status gg_poisson_solve(const gg_field* g, const gg_poisson_options* opts, gg_field** v,
                                  gg_poisson_info* info);
GG_API gg_status gg_laplacian_residual(const gg_field* v, const gg_field* g, double* out);

/* ---- radial solutions ---- */

typedef struct gg_profile gg_profile;
typedef double (*gg_radial_fn)(double r, void* user);

typedef struct gg_radial_problem {
  double tau;
  double f_inf;
  double amp;
  double zeta;
  double r0;
  double u0;
  double du0;
  double r_max;
  int n_steps;
} gg_radial_problem;

/* RK4 for f = f_inf + amp r^-zeta. On GG_NO_ROOT and GG_STEP_TOO_LARGE *out
 * holds the profile up to the last accepted node. */
GG_API gg_status gg_radial_integrate(const gg_radial_problem* pr, gg_profile** out);
/* Same with f = f_inf + delta(r); amp and zeta are ignored. */
GG_API gg_status gg_radial_integrate_fn(const gg_radial_problem* pr, gg_radial_fn delta, void* user,
                                        gg_profile** out);
/* Monge-Ampere profile with psi = 1 + c r^-2 on [1, r_max]. */
GG_API gg_status gg_counterexample_zeta2(double c, double r_max, gg_profile** out, gg_decay* fit,
                                         double* log2_coef);
/* Monge-Ampere oracle u'(r) for psi = 1 + psi_minus_one. */
GG_API gg_status gg_ma_radial_oracle(gg_radial_fn psi_minus_one, void* user, double r0, double du0,
                                     const double* r, size_t n, double* du);

typedef enum gg_profile_column { GG_R = 0, GG_U, GG_DU, GG_DDU, GG_W, GG_DW } gg_profile_column;

GG_API size_t gg_profile_size(const gg_profile* p);
GG_API const double* gg_profile_data(const gg_profile* p, gg_profile_column c);
GG_API double gg_profile_base_curvature(const gg_profile* p);
/* r,u,du,ddu rows; path "-" writes to standard output. */
GG_API gg_status gg_profile_write_csv(const gg_profile* p, const char* path);
GG_API void gg_profile_destroy(gg_profile* p);

/* ---- asymptotic expansion ---- */

typedef struct gg_coefficients {
  double A[3];
  double b[2];
  double c;
  double d;
  double d1;
  double d2;
} gg_coefficients;

typedef struct gg_fit_report {
  gg_coefficients coeffs;
  double P[3];
  int has_residual_p;
  double residual_p;
  double residual_q;
  double condition;
  double r_lo;
  double r_hi;
  double level_residual;
  int projected;
} gg_fit_report;

typedef struct gg_fit_options {
  double r_lo;
  double r_hi;
  double p_scale;
} gg_fit_options;

GG_API void gg_fit_options_default(gg_fit_options* o);
GG_API gg_status gg_expansion_value(const gg_coefficients* cf, const double P[3], double x1, double x2,
                                    double* out);
GG_API gg_status gg_expansion_hessian(const gg_coefficients* cf, const double P[3], double x1,
                                      double x2, double out[3]);
/* f = F_tau(lambda(D^2 u)) of the ansatz and its limit f_inf. */
GG_API gg_status gg_manufacture(const gg_coefficients* cf, double tau, const gg_grid* grid,
                                gg_field** f, double* f_inf, gg_decay* decay);
GG_API gg_status gg_sample_expansion(const gg_coefficients* cf, double tau, const gg_grid* grid,
                                     double p_scale, gg_field** out);
GG_API gg_status gg_fit_expansion(const gg_field* u, double tau, double f_inf,
                                  const gg_fit_options* opts, gg_fit_report* out);
/* Radial fit with A = lam I; the window is opts->r_lo .. opts->r_hi. */
GG_API gg_status gg_fit_radial(const gg_profile* p, double tau, double f_inf,
                               const gg_fit_options* opts, gg_fit_report* out);
/* Flat JSON document; writes at most cap bytes including the terminator and
 * stores the full length in *len. */
GG_API gg_status gg_fit_report_json(const gg_fit_report* r, char* buf, size_t cap, size_t* len);
/* order 0: behavior, 1: next. */
GG_API gg_status gg_theorem_rate(double zeta, int order, double* p, double* q);

/* ---- verification suite ---- */

typedef struct gg_suite gg_suite;

typedef struct gg_suite_row {
  const char* check;
  double expected;
  double observed;
  double tolerance;
  int pass;
} gg_suite_row;

GG_API size_t gg_suite_group_count(void);
GG_API const char* gg_suite_group_name(size_t i);
/* only may be NULL or "" for every group. */
GG_API gg_status gg_suite_run(uint64_t seed, const char* only, gg_suite** out);
GG_API size_t gg_suite_size(const gg_suite* s);
GG_API gg_status gg_suite_row_get(const gg_suite* s, size_t i, gg_suite_row* out);
GG_API int gg_suite_pass(const gg_suite* s);
/* Owned by the suite handle. */
GG_API const char* gg_suite_csv(const gg_suite* s);
GG_API void gg_suite_destroy(gg_suite* s);

#ifdef __cplusplus
}
#endif

#endif
