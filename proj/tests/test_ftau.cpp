#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"
#include "ftau.hpp"
#include "sym2.hpp"

using namespace gg;

namespace {

constexpr double kPi = std::numbers::pi;

double random_tau(std::mt19937_64& g, int branch) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (branch) {
    case 0: return 0.0;
    case 1: return 0.05 + (kPi / 4 - 0.1) * u(g);
    case 2: return kPi / 4;
    case 3: return kPi / 4 + 0.05 + (kPi / 4 - 0.1) * u(g);
    default: return kPi / 2;
  }
}

double random_lambda(std::mt19937_64& g, const TauParams& p) {
  const double lo = semiconvex_lower_bound(p);
  if (std::isfinite(lo)) return lo + std::exp(std::uniform_real_distribution<double>(-2, 2)(g));
  return std::uniform_real_distribution<double>(-5, 5)(g);
}

SymMat2 random_admissible(std::mt19937_64& g, const TauParams& p) {
  Spectrum s;
  s.lam1 = random_lambda(g, p);
  s.lam2 = random_lambda(g, p);
  s.theta_e = std::uniform_real_distribution<double>(0, kPi)(g);
  return s.reconstruct();
}

void close(const SymMat2& a, const SymMat2& b, double tol) {
  CHECK(a.m11 == doctest::Approx(b.m11).epsilon(tol));
  CHECK(std::fabs(a.m12 - b.m12) <= tol);
  CHECK(a.m22 == doctest::Approx(b.m22).epsilon(tol));
}

}  // namespace

TEST_CASE("tau_params branches") {
  const TauParams spl = tau_params(kPi / 2);
  CHECK(spl.branch == Branch::SpecialLagrangian);
  CHECK(std::fabs(spl.a) < 1e-15);

  const TauParams q = tau_params(kPi / 4);
  CHECK(q.branch == Branch::Quarter);
  CHECK(q.a == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q.b_coef == 0.0);

  const TauParams s = tau_params(kPi / 3);
  CHECK(s.branch == Branch::SuperQuarter);
  CHECK(s.a == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(s.b_coef == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  CHECK(s.b_coef * s.b_coef - s.a * s.a == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  CHECK(tau_params(0.0).branch == Branch::MongeAmpere);
  CHECK(tau_params(0.3).branch == Branch::SubQuarter);
  CHECK(tau_params(kPi / 4 + 5e-13).branch == Branch::Quarter);
  CHECK_THROWS_AS(tau_params(-0.1), Error);
  CHECK_THROWS_AS(tau_params(2.0), Error);
}

TEST_CASE("eigendecomposition") {
  Spectrum s = eigs(SymMat2::diag(2, 1));
  CHECK(s.lam1 == 1.0);
  CHECK(s.lam2 == 2.0);
  CHECK(std::fabs(std::sin(2 * s.theta_e)) < 1e-15);

  s = eigs(SymMat2{0, 1, 0});
  CHECK(s.lam1 == doctest::Approx(-1.0));
  CHECK(s.lam2 == doctest::Approx(1.0));
  CHECK(s.theta_e == doctest::Approx(kPi / 4).epsilon(1e-14));

  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int n = 0; n < 1000; ++n) {
    const SymMat2 m{u(g), u(g), u(g)};
    const SymMat2 back = eigs(m).reconstruct();
    CHECK((back - m).max_abs() < 1e-12 * std::max(1.0, m.max_abs()));
  }
}

TEST_CASE("semiconvex bounds") {
  CHECK(semiconvex_lower_bound(tau_params(0)) == 0.0);
  CHECK(semiconvex_lower_bound(tau_params(kPi / 4)) == doctest::Approx(-1.0));
  CHECK(std::isinf(semiconvex_lower_bound(tau_params(kPi / 2))));
  CHECK(semiconvex_lower_bound(tau_params(kPi / 2)) < 0);
  CHECK_THROWS_AS(check_admissible(Eigenpair{1.0, -0.5}, tau_params(0)), DomainViolation);
  try {
    check_admissible(Eigenpair{1.0, -0.5}, tau_params(0));
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("DOMAIN_VIOLATION") == 0);
  }
}

TEST_CASE("f_tau values") {
  CHECK(f_tau(Eigenpair{1, 1}, tau_params(kPi / 2)) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(f_tau(Eigenpair{1, 1}, tau_params(0)) == 0.0);
  CHECK(f_tau(Eigenpair{0, 0}, tau_params(kPi / 4)) == doctest::Approx(-2 * std::sqrt(2.0)).epsilon(1e-15));

  // Arctan form of the super-quarter branch.
  const TauParams p = tau_params(kPi / 3);
  const double c = std::sqrt(p.a * p.a + 1) / p.b_coef;
  double alt = 0.0;
  for (double l : {1.0, 2.0}) alt += c * (std::atan((l + p.a) / p.b_coef) - kPi / 4);
  CHECK(std::fabs(f_tau(Eigenpair{1, 2}, p) - alt) < 1e-12);
}

TEST_CASE("increments match differences") {
  std::mt19937_64 g(5);
  for (int b = 0; b < 5; ++b) {
    for (int n = 0; n < 200; ++n) {
      const TauParams p = tau_params(random_tau(g, b));
      const double lam = random_lambda(g, p);
      const double t = 0.3 * (lam - semiconvex_lower_bound(p)) * std::uniform_real_distribution<double>(-1, 1)(g);
      const double t_spl = std::isfinite(semiconvex_lower_bound(p)) ? t : std::uniform_real_distribution<double>(-2, 2)(g);
      const double diff = f_tau_term(lam + t_spl, p) - f_tau_term(lam, p);
      CHECK(f_tau_term_increment(lam, t_spl, p) == doctest::Approx(diff).epsilon(1e-9).scale(1.0));
    }
  }
  // Small increments keep relative precision.
  const TauParams ma = tau_params(0);
  CHECK(f_tau_term_increment(1.0, 1e-20, ma) == doctest::Approx(0.5e-20).epsilon(1e-14));
}

TEST_CASE("df_scalar examples") {
  CHECK(df_scalar(0.0, tau_params(kPi / 2)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(df_scalar(2.0, tau_params(0)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(df_scalar(1.0, tau_params(kPi / 4)) == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-15));
  CHECK(df_scalar_branchwise(1.0, tau_params(kPi / 4)) == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-15));
}

TEST_CASE("unified derivative and ellipticity, all branches") {
  std::mt19937_64 g(7);
  for (int b = 0; b < 5; ++b) {
    for (int n = 0; n < 1000; ++n) {
      const TauParams p = tau_params(random_tau(g, b));
      const double lam = random_lambda(g, p);
      const double d = df_scalar(lam, p);
      REQUIRE(d > 0.0);
      CHECK(std::fabs(df_scalar_branchwise(lam, p) - d) <= 1e-10 * d);
      const double h = 1e-6 * std::max(1.0, std::fabs(lam));
      const double fd = (f_tau_term(lam + h, p) - f_tau_term(lam - h, p)) / (2 * h);
      CHECK(std::fabs(fd - d) <= 1e-6 * d);
    }
  }
}

TEST_CASE("df_mat") {
  close(df_mat(SymMat2::identity(), tau_params(kPi / 2)), SymMat2::scalar(0.5), 1e-15);
  close(df_mat(SymMat2::diag(1, 2), tau_params(0)), SymMat2::diag(0.5, 0.25), 1e-15);

  std::mt19937_64 g(11);
  for (int n = 0; n < 1000; ++n) {
    const TauParams p = tau_params(random_tau(g, n % 5));
    const SymMat2 a = random_admissible(g, p);
    const Mat2 x = multiply(df_mat(a, p), a);
    const Mat2 y = multiply(a, df_mat(a, p));
    double e = 0.0;
    for (int k = 0; k < 4; ++k) e = std::max(e, std::fabs(x[k] - y[k]));
    CHECK(e < 1e-12 * std::max(1.0, a.max_abs()));
  }
}

TEST_CASE("matrix_P") {
  close(matrix_P(SymMat2::identity(), tau_params(kPi / 2)), SymMat2::identity(), 1e-15);
  close(matrix_P(SymMat2::diag(1, 2), tau_params(0)), SymMat2::diag(1, 2), 1e-15);
  close(matrix_P(SymMat2::identity(), tau_params(kPi / 4)), SymMat2::scalar(std::sqrt(2.0)), 1e-15);

  std::mt19937_64 g(13);
  for (int n = 0; n < 1000; ++n) {
    const TauParams p = tau_params(random_tau(g, n % 5));
    const SymMat2 a = random_admissible(g, p);
    const Mat2 m = multiply(matrix_P(a, p), df_mat(a, p));
    CHECK(std::fabs(2 * m[0] - 1) < 1e-10);
    CHECK(std::fabs(2 * m[1]) < 1e-10);
    CHECK(std::fabs(2 * m[2]) < 1e-10);
    CHECK(std::fabs(2 * m[3] - 1) < 1e-10);
  }
}

TEST_CASE("attainable ranges") {
  const AdmissibleRange spl = attainable_range(tau_params(kPi / 2));
  CHECK(spl.lo == doctest::Approx(-kPi));
  CHECK(spl.hi == doctest::Approx(kPi));
  const AdmissibleRange ma = attainable_range(tau_params(0));
  CHECK(std::isinf(ma.lo));
  CHECK(std::isinf(ma.hi));
  const AdmissibleRange q = attainable_range(tau_params(kPi / 4));
  CHECK(q.hi == 0.0);
  CHECK_FALSE(q.contains_interior(0.0));
  CHECK(q.contains_interior(-0.1));
}

TEST_CASE("calibration") {
  CHECK(calibrate_diagonal(tau_params(kPi / 2), kPi / 2, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(calibrate_diagonal(tau_params(0), 0.0, 4.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(calibrate_diagonal(tau_params(kPi / 4), -std::sqrt(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  try {
    calibrate_diagonal(tau_params(kPi / 4), 0.1, 1.0);
    FAIL("expected OUT_OF_RANGE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
    CHECK(std::string(e.what()).find("0") != std::string::npos);
  }

  std::mt19937_64 g(17);
  for (int n = 0; n < 500; ++n) {
    const TauParams p = tau_params(random_tau(g, n % 5));
    const double l1 = random_lambda(g, p), l2 = random_lambda(g, p);
    const double f = f_tau(Eigenpair{l1, l2}, p);
    if (!limit_value_admissible(p, f)) continue;
    const double back = calibrate_diagonal(p, f, l1);
    CHECK(std::fabs(f_tau(Eigenpair{l1, back}, p) - f) <= 1e-12 * std::max(1.0, std::fabs(f)));
  }
}

TEST_CASE("special Lagrangian algebraic form") {
  CHECK(algebraic_residual_spl(SymMat2::identity(), kPi / 2) == doctest::Approx(0.0));
  CHECK(algebraic_residual_spl(SymMat2::diag(1, -1), 0.0) == 0.0);
  std::mt19937_64 g(19);
  const TauParams spl = tau_params(kPi / 2);
  for (int n = 0; n < 1000; ++n) {
    const SymMat2 m = random_admissible(g, spl);
    const double scale = 1.0 + std::fabs(m.trace()) + std::fabs(m.det());
    CHECK(std::fabs(algebraic_residual_spl(m, f_tau(m, spl))) < 1e-12 * scale);
  }
}

TEST_CASE("super-quarter reduction") {
  const TauParams p = tau_params(kPi / 3);
  PointJet u;
  u.x = {1.0, 2.0};
  u.hess = SymMat2::identity();
  const PointJet v = reduce_superquarter(u, p);
  const double expect = (1 + 1 / std::sqrt(3.0)) / std::sqrt(2.0 / 3.0);
  close(v.hess, SymMat2::scalar(expect), 1e-14);

  u.hess = SymMat2::scalar(-(p.a + p.b_coef - 1e-6));
  const Spectrum edge = eigs(reduce_superquarter(u, p).hess);
  CHECK(edge.lam1 > -1.0);
  CHECK(edge.lam1 < -1.0 + 1e-5);

  CHECK_THROWS_AS(reduce_superquarter(u, tau_params(kPi / 2)), Error);

  std::mt19937_64 g(23);
  for (int n = 0; n < 1000; ++n) {
    const TauParams q = tau_params(random_tau(g, 3));
    u.hess = random_admissible(g, q);
    const Spectrum s = eigs(reduce_superquarter(u, q).hess);
    const double phase = std::atan(s.lam1) + std::atan(s.lam2);
    CHECK(std::fabs(phase - superquarter_phase(f_tau(u.hess, q), q)) < 1e-12);
  }
}

TEST_CASE("arctan identity on the super-quarter branch") {
  std::mt19937_64 g(29);
  for (int n = 0; n < 1000; ++n) {
    const TauParams p = tau_params(random_tau(g, 3));
    const double lam = random_lambda(g, p);
    const double lhs = std::atan((lam + p.a - p.b_coef) / (lam + p.a + p.b_coef));
    const double rhs = std::atan((lam + p.a) / p.b_coef) - kPi / 4;
    CHECK(std::fabs(lhs - rhs) < 1e-12);
  }
}
