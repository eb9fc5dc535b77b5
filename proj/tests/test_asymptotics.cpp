#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <json.hpp>

#include "asymptotics.hpp"
#include "error.hpp"
#include "ftau.hpp"
#include "radial.hpp"

using namespace gg;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

AsymptoticCoefficients full_coeffs() {
  AsymptoticCoefficients cf;
  cf.A = SymMat2::diag(1.0, 2.0);
  cf.b = {0.4, -0.3};
  cf.c = 1.0;
  cf.d = 0.3;
  cf.d1 = 0.1;
  cf.d2 = -0.2;
  return cf;
}

}  // namespace

TEST_CASE("expansion values") {
  AsymptoticCoefficients q;
  CHECK(expansion_value(q, SymMat2::identity(), {3.0, 4.0}) == doctest::Approx(12.5).epsilon(1e-15));

  AsymptoticCoefficients log_only;
  log_only.A = SymMat2{};
  log_only.d = 1.0;
  const double e = std::exp(1.0);
  CHECK(expansion_value(log_only, SymMat2::identity(), {e, 0.0}) == doctest::Approx(2.0).epsilon(1e-14));

  AsymptoticCoefficients dip;
  dip.A = SymMat2{};
  dip.d1 = 1.0;
  for (double r : {2.0, 10.0, 1e3}) {
    CHECK(expansion_value(dip, SymMat2::identity(), {r, 0.0}) == doctest::Approx(1.0 / r).epsilon(1e-14));
  }

  CHECK(code_of([&] { expansion_value(q, SymMat2::diag(1.0, -1.0), {1.0, 1.0}); }) == ErrorCode::SingularP);
  CHECK(code_of([&] { expansion_value(q, SymMat2::identity(), {0.0, 0.0}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Hessian against finite differences") {
  const TauParams p = tau_params(kPi / 2);
  const AsymptoticCoefficients cf = full_coeffs();
  const SymMat2 P = matrix_P(cf.A, p);
  CHECK(expansion_hessian(AsymptoticCoefficients{}, P, {5.0, 1.0}).m11 == doctest::Approx(1.0));

  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> lr(std::log(10.0), std::log(1e3));
  std::uniform_real_distribution<double> th(0.0, 2 * kPi);
  for (int n = 0; n < 1000; ++n) {
    const double r = std::exp(lr(g));
    const double t = th(g);
    const Vec2 x{r * std::cos(t), r * std::sin(t)};
    const double h = 1e-3 * r;
    auto u = [&](double dx, double dy) { return expansion_value(cf, P, {x.x + dx, x.y + dy}); };
    const double u0 = u(0, 0);
    const SymMat2 fd{(u(h, 0) - 2 * u0 + u(-h, 0)) / (h * h),
                     (u(h, h) - u(h, -h) - u(-h, h) + u(-h, -h)) / (4 * h * h),
                     (u(0, h) - 2 * u0 + u(0, -h)) / (h * h)};
    const SymMat2 an = expansion_hessian(cf, P, x);
    CHECK((fd - an).max_abs() <= 1e-6 * an.max_abs());
  }
}

TEST_CASE("dipole is harmonic in y") {
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int n = 0; n < 200; ++n) {
    const Vec2 y{u(g), u(g)};
    if (y.norm() < 1.0) continue;
    const SymMat2 h = dipole_hessian_y(0.7, -1.3, y);
    CHECK(std::fabs(h.trace()) <= 1e-12 * h.max_abs());
  }
}

TEST_CASE("manufactured right-hand sides") {
  const TauParams spl = tau_params(kPi / 2);
  const AnnulusGrid grid{10.0, 1e3, 64, 32};

  const ManufacturedRhs flat = manufacture_rhs(AsymptoticCoefficients{}, spl, grid);
  CHECK(flat.f_inf == doctest::Approx(kPi / 2).epsilon(1e-15));
  for (double v : flat.f.values) CHECK(v == doctest::Approx(kPi / 2).epsilon(1e-13));
  for (double v : flat.delta.values) CHECK(std::fabs(v) < 1e-13);

  AsymptoticCoefficients log_only;
  log_only.d = 0.3;
  const ManufacturedRhs m = manufacture_rhs(log_only, spl, grid);
  REQUIRE(m.decay);
  CHECK(m.decay->p == doctest::Approx(4.0).epsilon(0.025));

  // The trace-free dipole Hessian cancels against DF at first order.
  AsymptoticCoefficients dip;
  dip.d1 = 0.1;
  const ManufacturedRhs md = manufacture_rhs(dip, spl, grid);
  REQUIRE(md.decay);
  CHECK(md.decay->p == doctest::Approx(6.0).epsilon(0.025));

  AsymptoticCoefficients both = log_only;
  both.d1 = 0.1;
  const ManufacturedRhs mb = manufacture_rhs(both, spl, grid);
  REQUIRE(mb.decay);
  CHECK(mb.decay->p == doctest::Approx(4.0).epsilon(0.025));
}

TEST_CASE("fit recovers the exact quadratic") {
  const TauParams spl = tau_params(kPi / 2);
  const ScalarField u = sample_expansion(AsymptoticCoefficients{}, spl, AnnulusGrid{100.0, 1e4, 64, 32});
  const FitReport r = fit_expansion(u, spl, kPi / 2, FitOptions{});
  CHECK(r.coeffs.A.m11 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::fabs(r.coeffs.A.m12) < 1e-8);
  CHECK(r.coeffs.A.m22 == doctest::Approx(1.0).epsilon(1e-8));
  for (double v : {r.coeffs.b.x, r.coeffs.b.y, r.coeffs.c, r.coeffs.d}) CHECK(std::fabs(v) < 1e-8);
  // The dipole columns are 1e-8 of the quadratic ones at the outer radius.
  CHECK(std::fabs(r.coeffs.d1) < 1e-6);
  CHECK(std::fabs(r.coeffs.d2) < 1e-6);
}

TEST_CASE("fit roundtrip without remainder") {
  const AsymptoticCoefficients cf = full_coeffs();
  for (double tau : {0.0, 0.5, kPi / 4, 1.2, kPi / 2}) {
    const TauParams p = tau_params(tau);
    const double f_inf = f_tau(cf.A, p);
    const ScalarField u = sample_expansion(cf, p, AnnulusGrid{100.0, 1e4, 64, 32});
    const FitReport r = fit_expansion(u, p, f_inf, FitOptions{});
    const AsymptoticCoefficients& k = r.coeffs;
    CHECK(k.A.m11 == doctest::Approx(cf.A.m11).epsilon(1e-6));
    CHECK(std::fabs(k.A.m12) < 1e-6);
    CHECK(k.A.m22 == doctest::Approx(cf.A.m22).epsilon(1e-6));
    CHECK(k.b.x == doctest::Approx(cf.b.x).epsilon(1e-6));
    CHECK(k.b.y == doctest::Approx(cf.b.y).epsilon(1e-6));
    CHECK(k.c == doctest::Approx(cf.c).epsilon(1e-6));
    CHECK(k.d == doctest::Approx(cf.d).epsilon(1e-6));
    CHECK(k.d1 == doctest::Approx(cf.d1).epsilon(1e-6));
    CHECK(k.d2 == doctest::Approx(cf.d2).epsilon(1e-6));
  }
}

TEST_CASE("fit roundtrip with a decaying remainder") {
  const TauParams spl = tau_params(kPi / 2);
  const AsymptoticCoefficients cf = full_coeffs();
  ScalarField u = sample_expansion(cf, spl, AnnulusGrid{100.0, 1e4, 64, 32});
  for (int j = 0; j < u.grid.n_r; ++j) {
    const double r = u.grid.radius(j);
    for (int i = 0; i < u.grid.n_theta; ++i) u.at(j, i) += 0.5 * std::cos(2 * u.grid.angle(i)) / (r * r);
  }
  const FitReport r = fit_expansion(u, spl, f_tau(cf.A, spl), FitOptions{});
  CHECK(r.coeffs.c == doctest::Approx(cf.c).epsilon(1e-3));
  CHECK(r.coeffs.d == doctest::Approx(cf.d).epsilon(1e-3));
  CHECK(r.coeffs.d1 == doctest::Approx(cf.d1).epsilon(1e-3));
  CHECK(r.coeffs.d2 == doctest::Approx(cf.d2).epsilon(1e-3));
  CHECK(r.residual_max < 0.5e-4 * 1.1);
}

TEST_CASE("P scaling moves c and the dipole") {
  const TauParams spl = tau_params(kPi / 2);
  const AsymptoticCoefficients cf = full_coeffs();
  const ScalarField u = sample_expansion(cf, spl, AnnulusGrid{100.0, 1e4, 64, 32});
  const FitReport one = fit_expansion(u, spl, f_tau(cf.A, spl), FitOptions{});
  FitOptions two_opts;
  two_opts.p_scale = 2.0;
  const FitReport two = fit_expansion(u, spl, f_tau(cf.A, spl), two_opts);
  CHECK(std::fabs(two.coeffs.A.m11 - one.coeffs.A.m11) < 1e-10);
  CHECK(std::fabs(two.coeffs.A.m22 - one.coeffs.A.m22) < 1e-10);
  CHECK(std::fabs(two.coeffs.b.x - one.coeffs.b.x) < 1e-10);
  CHECK(std::fabs(two.coeffs.b.y - one.coeffs.b.y) < 1e-10);
  CHECK(std::fabs(two.coeffs.d - one.coeffs.d) < 1e-9);
  CHECK(two.coeffs.c == doctest::Approx(one.coeffs.c - one.coeffs.d * std::log(2.0)).epsilon(1e-8));
  CHECK(two.coeffs.d1 == doctest::Approx(std::sqrt(2.0) * one.coeffs.d1).epsilon(1e-5));
  CHECK(two.coeffs.d2 == doctest::Approx(std::sqrt(2.0) * one.coeffs.d2).epsilon(1e-5));
}

TEST_CASE("window validation") {
  const TauParams spl = tau_params(kPi / 2);
  const ScalarField u = sample_expansion(AsymptoticCoefficients{}, spl, AnnulusGrid{100.0, 1e4, 64, 32});
  FitOptions narrow;
  narrow.r_lo = 200.0;
  narrow.r_hi = 300.0;
  CHECK(code_of([&] { fit_expansion(u, spl, kPi / 2, narrow); }) == ErrorCode::WindowTooNarrow);
  FitOptions outside;
  outside.r_lo = 10.0;
  CHECK(code_of([&] { fit_expansion(u, spl, kPi / 2, outside); }) == ErrorCode::WindowTooNarrow);
}

TEST_CASE("radial log coefficient against the closed form") {
  // psi = 1 + r^-2.5 gives u'^2 = r^2 + 4 - 4 r^-1/2, so u ~ r^2/2 + 2 ln r.
  const TauParams ma = tau_params(0);
  const RadialRhs rhs{0.0, [](double r) { return 0.5 * std::log1p(std::pow(r, -2.5)); }};
  const RadialProfile prof = integrate_radial(ma, rhs, 1.0, 0.5, 1.0, 1e6, 20000);
  RadialFitOptions o;
  o.r_hi = 1e6;
  const RadialFitReport rf = fit_radial_expansion(prof, ma, 0.0, o);
  CHECK(rf.report.coeffs.d == doctest::Approx(1.0).epsilon(0.01));
  CHECK(rf.report.coeffs.A.m11 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("radial remainder rate at zeta = 2.5") {
  const TauParams ma = tau_params(0);
  const RadialProfile prof = integrate_radial(ma, PerturbedRHS{0.0, 0.5, 2.5}, 1.0, 0.5, 1.0, 1e6, 20000);
  RadialFitOptions o;
  o.r_hi = 1e6;
  const RadialFitReport rf = fit_radial_expansion(prof, ma, 0.0, o);
  REQUIRE(rf.report.residual_fit);
  CHECK(std::fabs(rf.report.residual_fit->p - 0.5) < 0.1);
  CHECK(rf.report.coeffs.d1 == 0.0);
  CHECK(rf.report.coeffs.d2 == 0.0);
}

TEST_CASE("decay fits") {
  std::vector<double> r, one, two;
  for (int j = 0; j <= 80; ++j) {
    const double x = std::pow(10.0, 1.0 + j / 20.0);
    r.push_back(x);
    one.push_back(3.0 / x);
    two.push_back(std::log(x) / (x * x));
  }
  const DecayFit a = decay_fit(r, one);
  CHECK(a.p == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(a.q == 0.0);
  CHECK(a.c0 == doctest::Approx(3.0).epsilon(1e-8));
  const DecayFit b = decay_fit(r, two);
  CHECK(b.p == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(b.q == 1.0);
}

TEST_CASE("theorem rates") {
  const Rate a = theorem_rate(2.5, RateOrder::Behavior);
  CHECK(a.p == doctest::Approx(0.5));
  CHECK(a.q == 0.0);
  const Rate b = theorem_rate(3.0, RateOrder::Behavior);
  CHECK(b.p == doctest::Approx(1.0));
  CHECK(b.q == 1.0);
  const Rate c = theorem_rate(5.0, RateOrder::Next);
  CHECK(c.p == doctest::Approx(2.0));
  CHECK(c.q == 1.0);
  CHECK(code_of([] { theorem_rate(2.0, RateOrder::Behavior); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { theorem_rate(3.0, RateOrder::Next); }) == ErrorCode::OutOfRange);
}

TEST_CASE("fit report JSON") {
  FitReport r;
  r.coeffs.c = 0.25;
  const std::string s = fit_report_json(r);
  const auto j = nlohmann::ordered_json::parse(s);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  const std::vector<std::string> want = {"A11", "A12", "A22", "b1", "b2", "c", "d",
                                         "d1", "d2", "residual_p", "residual_q", "condition",
                                         "r_lo", "r_hi"};
  CHECK(keys == want);
  CHECK(j["residual_p"].is_null());
  CHECK(j["c"].get<double>() == 0.25);
}
