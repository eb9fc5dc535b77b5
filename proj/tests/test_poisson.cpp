#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"
#include "loglog.hpp"
#include "poisson.hpp"

using namespace gg;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

struct TrigPoly {
  double c[4], s[4];
  double operator()(double r, double t) const {
    double v = c[0] / r;
    for (int k = 1; k < 4; ++k) v += (c[k] * std::cos(k * t) + s[k] * std::sin(k * t)) * std::pow(r, -k - 1.0);
    return v;
  }
};

TrigPoly random_poly(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1, 1);
  TrigPoly p{};
  for (int k = 0; k < 4; ++k) {
    p.c[k] = u(g);
    p.s[k] = k ? u(g) : 0.0;
  }
  return p;
}

// Radial derivative by central differences in s = ln r (interior radii).
void radial_derivative_norms(const ScalarField& v, std::vector<double>& r, std::vector<double>& norms) {
  const AnnulusGrid& g = v.grid;
  const double h = g.step();
  ScalarField dv{g, std::vector<double>(v.values.size(), 0.0)};
  for (int j = 1; j + 1 < g.n_r; ++j) {
    for (int i = 0; i < g.n_theta; ++i) dv.at(j, i) = (v.at(j + 1, i) - v.at(j - 1, i)) / (2 * h * g.radius(j));
  }
  const std::vector<double> all = circle_l2_norms(dv);
  r.clear();
  norms.clear();
  for (int j = 1; j + 1 < g.n_r; ++j) {
    r.push_back(g.radius(j));
    norms.push_back(all[j]);
  }
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS((AnnulusGrid{0.5, 10, 64, 16}.validate()), Error);
  CHECK_THROWS_AS((AnnulusGrid{2, 10, 8, 16}.validate()), Error);
  CHECK_THROWS_AS((AnnulusGrid{2, 10, 64, 7}.validate()), Error);
  const AnnulusGrid g{2, 200, 101, 16};
  CHECK(g.radius(0) == 2.0);
  CHECK(g.radius(100) == 200.0);
  CHECK(g.radius(50) == doctest::Approx(20.0).epsilon(1e-14));
}

TEST_CASE("fourier modes of single harmonics") {
  const AnnulusGrid g{2, 200, 64, 32};
  const ScalarField f = sample_field(g, [](double r, double t) { return std::pow(r, -4.0) * std::cos(t); });
  const FourierModes m = fourier_decompose(f, 8);
  for (int j = 0; j < g.n_r; ++j) {
    const double r = g.radius(j);
    CHECK(m.mode(1, 1)[j] == doctest::Approx(std::sqrt(kPi) * std::pow(r, -4.0)).epsilon(1e-12));
  }
  for (int k = 0; k <= 8; ++k) {
    for (int mm = 1; mm <= (k ? 2 : 1); ++mm) {
      if (k == 1 && mm == 1) continue;
      CHECK(max_abs(m.mode(k, mm)) < 1e-12 * std::pow(2.0, -4.0));
    }
  }

  const ScalarField f0 = sample_field(g, [](double r, double) { return 1.0 / (r * r); });
  const FourierModes m0 = fourier_decompose(f0, 8);
  for (int j = 0; j < g.n_r; ++j) {
    const double r = g.radius(j);
    CHECK(m0.mode(0, 1)[j] == doctest::Approx(std::sqrt(2 * kPi) / (r * r)).epsilon(1e-12));
  }
  for (int k = 1; k <= 8; ++k) {
    CHECK(max_abs(m0.mode(k, 1)) < 1e-12);
    CHECK(max_abs(m0.mode(k, 2)) < 1e-12);
  }
  CHECK_THROWS_AS(fourier_decompose(f, 16), Error);
}

TEST_CASE("trigonometric polynomial roundtrip and Parseval") {
  std::mt19937_64 rng(41);
  const AnnulusGrid g{2, 50, 32, 16};
  for (int n = 0; n < 10; ++n) {
    const TrigPoly p = random_poly(rng);
    const ScalarField f = sample_field(g, p);
    const FourierModes m = fourier_decompose(f, 5);
    for (int j = 0; j < g.n_r; ++j) {
      const double r = g.radius(j);
      CHECK(std::fabs(m.mode(0, 1)[j] - std::sqrt(2 * kPi) * p.c[0] / r) < 1e-12);
      for (int k = 1; k < 4; ++k) {
        const double scale = std::sqrt(kPi) * std::pow(r, -k - 1.0);
        CHECK(std::fabs(m.mode(k, 1)[j] - scale * p.c[k]) < 1e-12);
        CHECK(std::fabs(m.mode(k, 2)[j] - scale * p.s[k]) < 1e-12);
      }
    }
    const ScalarField back = assemble(m);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(std::fabs(back.values[i] - f.values[i]) < 1e-12);

    const std::vector<double> norms = circle_l2_norms(f);
    for (int j = 0; j < g.n_r; ++j) {
      double e = 0.0;
      for (const auto& c : m.coeffs) e += c[j] * c[j];
      CHECK(std::fabs(e - norms[j] * norms[j]) < 1e-10);
    }
  }
}

TEST_CASE("assemble of single and empty modes") {
  const AnnulusGrid g{2, 50, 32, 16};
  FourierModes m;
  m.grid = g;
  m.k_max = 3;
  m.coeffs.assign(7, std::vector<double>(g.n_r, 0.0));
  CHECK(max_abs(assemble(m).values) == 0.0);
  for (int j = 0; j < g.n_r; ++j) m.mode(1, 1)[j] = std::pow(g.radius(j), -2.0);
  const ScalarField f = assemble(m);
  for (int j = 0; j < g.n_r; ++j) {
    for (int i = 0; i < g.n_theta; ++i) {
      const double want = std::pow(g.radius(j), -2.0) * std::cos(g.angle(i)) / std::sqrt(kPi);
      CHECK(f.at(j, i) == doctest::Approx(want).epsilon(1e-13).scale(1e-3));
    }
  }
}

TEST_CASE("endpoint policy") {
  auto e = endpoint_policy(2, DecayClass{0.5, 0});
  CHECK(e.first == Endpoint::Infinity);
  CHECK(e.second == Endpoint::Reference);
  e = endpoint_policy(1, DecayClass{0.5, 0});
  CHECK(e.first == Endpoint::Reference);
  CHECK(e.second == Endpoint::Reference);
  e = endpoint_policy(1, DecayClass{1.5, 0});
  CHECK(e.first == Endpoint::Infinity);
  CHECK(e.second == Endpoint::Reference);
  // Source decaying faster than r^-(k+2): both integrals converge at infinity.
  e = endpoint_policy(0, DecayClass{3, 0});
  CHECK(e.first == Endpoint::Infinity);
  CHECK(e.second == Endpoint::Infinity);
  e = endpoint_policy(0, DecayClass{2, 0});
  CHECK(e.first == Endpoint::Reference);
  CHECK(e.second == Endpoint::Reference);
}

TEST_CASE("discrete laplacian") {
  const AnnulusGrid g{2, 100, 256, 32};
  const ScalarField ln = sample_field(g, [](double r, double) { return std::log(r); });
  const ScalarField zero = sample_field(g, [](double, double) { return 0.0; });
  CHECK(laplacian_residual(ln, zero) < 1e-10);

  double prev = 0.0;
  for (int n : {256, 512}) {
    const AnnulusGrid gn{2, 100, n, 32};
    const ScalarField v = sample_field(gn, [](double r, double) { return 1.0 / r; });
    const ScalarField src = sample_field(gn, [](double r, double) { return std::pow(r, -3.0); });
    const double res = laplacian_residual(v, src);
    if (n == 256) {
      CHECK(res < 1e-4);
    } else {
      CHECK(prev / res == doctest::Approx(4.0).epsilon(0.05));
    }
    prev = res;
  }

  const ScalarField lg = sample_field(g, [](double r, double) { return 0.5 * std::log(r) * std::log(r); });
  const ScalarField r2 = sample_field(g, [](double r, double) { return 1.0 / (r * r); });
  CHECK(laplacian_residual(lg, r2) < 1e-12);  // the stencil is exact on quadratics in ln r

  CHECK_THROWS_AS(discrete_laplacian(sample_field(AnnulusGrid{2, 1e6, 16, 32}, [](double, double) { return 0.0; })),
                  Error);
}

TEST_CASE("measured decay classes of sources") {
  const AnnulusGrid g{2, 200, 256, 16};
  DecayFit f = measure_decay_class(g.radii(), circle_l2_norms(sample_field(g, [](double r, double) { return std::pow(r, -3.0); })));
  CHECK(f.p == doctest::Approx(3.0).epsilon(0.05 / 3));
  CHECK(std::fabs(f.q) < 0.1);
  f = measure_decay_class(g.radii(), circle_l2_norms(sample_field(g, [](double r, double) { return std::log(r) / (r * r); })));
  CHECK(std::fabs(f.p - 2.0) < 0.05);
  CHECK(std::fabs(f.q - 1.0) < 0.1);
  f = measure_decay_class(g.radii(), circle_l2_norms(sample_field(g, [](double r, double) { return std::pow(r, -2.5); })));
  CHECK(std::fabs(f.p - 2.5) < 0.05);
}

TEST_CASE("closed-form solutions of the three regimes") {
  const AnnulusGrid g{2, 200, 512, 64};
  struct Case {
    std::function<double(double, double)> src, exact;
    double p, q;
  };
  const Case cases[] = {
      {[](double r, double) { return std::pow(r, -3.0); }, [](double r, double) { return 1.0 / r; }, 1, 0},
      {[](double r, double) { return std::pow(r, -2.0); },
       [](double r, double) { return 0.5 * std::log(r) * std::log(r); }, 0, 2},
      {[](double r, double t) { return std::pow(r, -4.0) * std::cos(t); },
       [](double r, double t) { return std::cos(t) / (3 * r * r); }, 2, 0},
  };
  for (const Case& c : cases) {
    const ScalarField src = sample_field(g, c.src);
    const PoissonSolution sol = solve_exterior_poisson(src);
    CHECK(laplacian_residual(sol.v, src) < 1e-4);
    const DecayFit fit = measure_decay_class(g.radii(), circle_l2_norms(sol.v));
    CHECK(std::fabs(fit.p - c.p) < 0.1);
    CHECK(std::fabs(fit.q - c.q) < 0.1);

    // v minus the exact particular solution is harmonic (discretely).
    const ScalarField ex = sample_field(g, c.exact);
    ScalarField diff = sol.v;
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= ex.values[i];
    const ScalarField zero{g, std::vector<double>(diff.values.size(), 0.0)};
    CHECK(laplacian_residual(diff, zero) < 2e-4);
  }
}

TEST_CASE("radial sources give radial solutions") {
  const AnnulusGrid g{2, 200, 256, 32};
  const PoissonSolution sol = solve_exterior_poisson(sample_field(g, [](double r, double) { return std::pow(r, -3.5); }));
  for (int k = 1; k <= sol.solution_modes.k_max; ++k) {
    CHECK(max_abs(sol.solution_modes.mode(k, 1)) < 1e-12);
    CHECK(max_abs(sol.solution_modes.mode(k, 2)) < 1e-12);
  }
  CHECK(sol.modes_solved == 1);
}

TEST_CASE("non-integer source class") {
  const AnnulusGrid g{2, 200, 512, 128};
  const ScalarField src = sample_field(g, [](double r, double t) { return std::pow(r, -2.5) * (1 + 0.5 * std::cos(2 * t)); });
  const PoissonSolution sol = solve_exterior_poisson(src);
  CHECK(laplacian_residual(sol.v, src) < 1e-4);
  const DecayFit fit = measure_decay_class(g.radii(), circle_l2_norms(sol.v));
  CHECK(std::fabs(fit.p - 0.5) < 0.1);
  CHECK(std::fabs(fit.q) < 0.1);
}

TEST_CASE("first derivatives lose one power") {
  const AnnulusGrid g{2, 200, 512, 64};
  const struct {
    std::function<double(double, double)> src;
    double p;
  } cases[] = {
      {[](double r, double) { return std::pow(r, -3.0); }, 2.0},
      {[](double r, double t) { return std::pow(r, -4.0) * std::cos(t); }, 3.0},
      {[](double r, double) { return std::pow(r, -3.5); }, 2.5},
  };
  for (const auto& c : cases) {
    const PoissonSolution sol = solve_exterior_poisson(sample_field(g, c.src));
    std::vector<double> r, n;
    radial_derivative_norms(sol.v, r, n);
    const DecayFit fit = decay_fit_samples(r, n, {}, 0.0);
    CHECK(std::fabs(fit.p - c.p) < 0.15);
  }
}

TEST_CASE("explicit decay class and tails") {
  const AnnulusGrid g{2, 200, 256, 32};
  const ScalarField src = sample_field(g, [](double r, double) { return std::pow(r, -3.0); });
  PoissonOptions o;
  o.decay = DecayClass{3, 0};
  const PoissonSolution sol = solve_exterior_poisson(src, o);
  CHECK(sol.source_class.k1 == 3.0);
  CHECK(laplacian_residual(sol.v, src) < 1e-4);

  o.decay = DecayClass{-1, 0};
  CHECK_THROWS_AS(solve_exterior_poisson(src, o), Error);

  // A growing source cannot be integrated from infinity.
  std::vector<double> b(g.n_r);
  for (int j = 0; j < g.n_r; ++j) b[j] = g.radius(j);
  try {
    mode_particular_solution(0, g, b, DecayClass{3, 0});
    FAIL("expected TAIL_DIVERGENT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TailDivergent);
  }
}
