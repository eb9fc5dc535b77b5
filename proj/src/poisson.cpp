#include "poisson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "error.hpp"

namespace gg {

namespace {

constexpr double kPi = std::numbers::pi;

// Cumulative integral from node 0: Simpson on even nodes, a three-point
// partial panel on odd ones.
std::vector<double> prefix_integral(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 2; j < n; j += 2) {
    out[j] = out[j - 2] + h / 3.0 * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
  }
  for (std::size_t j = 1; j < n; j += 2) {
    if (j + 1 < n) {
      out[j] = out[j - 1] + h / 12.0 * (5.0 * f[j - 1] + 8.0 * f[j] - f[j + 1]);
    } else {
      out[j] = out[j - 1] + h / 12.0 * (-f[j - 2] + 8.0 * f[j - 1] + 5.0 * f[j]);
    }
  }
  return out;
}

// Integral from node j to the last node, accumulated from the outer end.
std::vector<double> suffix_integral(const std::vector<double>& f, double h) {
  std::vector<double> rev(f.rbegin(), f.rend());
  std::vector<double> cum = prefix_integral(rev, h);
  return {cum.rbegin(), cum.rend()};
}

// Exponent q of |b| ~ r^-q over a window of nodes; nullopt if the window
// has zeros or changes sign.
std::optional<double> fit_power(const AnnulusGrid& grid, const std::vector<double>& b, bool outer) {
  const int n = grid.n_r;
  std::vector<int> idx;
  for (int j = 0; j < n; ++j) {
    const double r = grid.radius(j);
    if (outer ? r >= grid.r_max / 10.0 : r <= grid.r_min * 10.0) idx.push_back(j);
  }
  if (idx.size() < 4) {
    idx.clear();
    const int m = std::max(4, n / 4);
    for (int t = 0; t < m; ++t) idx.push_back(outer ? n - 1 - t : t);
  }
  const double sign = b[idx.front()];
  Eigen::MatrixXd x(idx.size(), 2);
  Eigen::VectorXd y(idx.size());
  for (std::size_t t = 0; t < idx.size(); ++t) {
    const double v = b[idx[t]];
    if (v == 0.0 || (v > 0.0) != (sign > 0.0)) return std::nullopt;
    x(t, 0) = 1.0;
    x(t, 1) = std::log(grid.radius(idx[t]));
    y(t) = std::log(std::fabs(v));
  }
  return -least_squares(x, y).coef(1);
}

double snap_integer(double v, double tol) {
  const double n = std::round(v);
  return std::fabs(v - n) < tol ? n : v;
}

struct Weighted {
  double alpha;      // integrand t^alpha b(t)
  bool with_log;     // extra factor ln t
};

// Integral over [R, inf) of t^alpha (ln t)^[with_log] b_R (t/R)^-q.
double tail_integral(const Weighted& w, double b_r, double r_max, double q, int k) {
  const double beta = q - w.alpha - 1.0;
  if (!(beta > 1e-8)) {
    fail(ErrorCode::TailDivergent,
         "mode k=" + std::to_string(k) + ": tail exponent " + fmt_num(q) +
             " does not make the weight t^" + fmt_num(w.alpha) + " integrable at infinity");
  }
  const double base = b_r * std::pow(r_max, w.alpha + 1.0);
  if (!w.with_log) return base / beta;
  return base * (std::log(r_max) / beta + 1.0 / (beta * beta));
}

// Integral over [rho, r0] of t^alpha (ln t)^[with_log] b_0 (t/r0)^-p.
double head_integral(const Weighted& w, double b_0, double r0, double rho, double p) {
  if (rho >= r0) return 0.0;
  auto integrand = [&](double x) {
    const double t = std::exp(x);
    const double val = b_0 * std::pow(t / r0, -p) * std::pow(t, w.alpha + 1.0);
    return w.with_log ? val * x : val;
  };
  return boost::math::quadrature::gauss<double, 30>::integrate(integrand, std::log(rho),
                                                               std::log(r0));
}

}  // namespace

void AnnulusGrid::validate() const {
  if (!(r_min > 1.0 && r_max > r_min && std::isfinite(r_max))) {
    fail(ErrorCode::InvalidArgument, "grid needs 1 < r_min < r_max, got r_min=" + fmt_num(r_min) +
                                         ", r_max=" + fmt_num(r_max));
  }
  if (n_r < 16) fail(ErrorCode::InvalidArgument, "n_r=" + std::to_string(n_r) + " below 16");
  if (n_theta < 8 || n_theta % 2 != 0) {
    fail(ErrorCode::InvalidArgument,
         "n_theta=" + std::to_string(n_theta) + " must be even and at least 8");
  }
}

double AnnulusGrid::step() const { return std::log(r_max / r_min) / (n_r - 1); }

double AnnulusGrid::radius(int j) const {
  if (j == n_r - 1) return r_max;
  return r_min * std::exp(j * step());
}

double AnnulusGrid::angle(int i) const { return 2.0 * kPi * i / n_theta; }

std::vector<double> AnnulusGrid::radii() const {
  std::vector<double> r(n_r);
  for (int j = 0; j < n_r; ++j) r[j] = radius(j);
  return r;
}

ScalarField sample_field(const AnnulusGrid& grid, const std::function<double(double, double)>& fn) {
  grid.validate();
  ScalarField f{grid, std::vector<double>(static_cast<std::size_t>(grid.n_r) * grid.n_theta)};
  for (int j = 0; j < grid.n_r; ++j) {
    const double r = grid.radius(j);
    for (int i = 0; i < grid.n_theta; ++i) f.at(j, i) = fn(r, grid.angle(i));
  }
  return f;
}

void DecayClass::validate() const {
  if (!(k1 > 0.0) || !(k2 >= 0.0)) {
    fail(ErrorCode::InvalidArgument,
         "decay class needs k1 > 0 and k2 >= 0, got (" + fmt_num(k1) + ", " + fmt_num(k2) + ")");
  }
}

FourierModes fourier_decompose(const ScalarField& field, int k_max) {
  const AnnulusGrid& g = field.grid;
  if (k_max < 0 || k_max >= g.n_theta / 2) {
    fail(ErrorCode::Aliasing, "k_max=" + std::to_string(k_max) + " needs to stay below n_theta/2=" +
                                  std::to_string(g.n_theta / 2));
  }
  FourierModes out;
  out.grid = g;
  out.k_max = k_max;
  out.coeffs.assign(2 * k_max + 1, std::vector<double>(g.n_r, 0.0));
  const double w = 2.0 * kPi / g.n_theta;
  const double y0 = 1.0 / std::sqrt(2.0 * kPi);
  const double yk = 1.0 / std::sqrt(kPi);
  std::vector<double> cs(g.n_theta), sn(g.n_theta);
  for (int k = 0; k <= k_max; ++k) {
    for (int i = 0; i < g.n_theta; ++i) {
      // Reduce k*i modulo n_theta so the phase stays exact.
      const double t = g.angle((k * i) % g.n_theta);
      cs[i] = std::cos(t);
      sn[i] = std::sin(t);
    }
    for (int j = 0; j < g.n_r; ++j) {
      double acc_c = 0.0, acc_s = 0.0;
      for (int i = 0; i < g.n_theta; ++i) {
        acc_c += field.at(j, i) * cs[i];
        acc_s += field.at(j, i) * sn[i];
      }
      if (k == 0) {
        out.mode(0, 1)[j] = w * y0 * acc_c;
      } else {
        out.mode(k, 1)[j] = w * yk * acc_c;
        out.mode(k, 2)[j] = w * yk * acc_s;
      }
    }
  }
  return out;
}

ScalarField assemble(const FourierModes& modes) {
  const AnnulusGrid& g = modes.grid;
  ScalarField f{g, std::vector<double>(static_cast<std::size_t>(g.n_r) * g.n_theta, 0.0)};
  const double y0 = 1.0 / std::sqrt(2.0 * kPi);
  const double yk = 1.0 / std::sqrt(kPi);
  for (int k = 0; k <= modes.k_max; ++k) {
    for (int i = 0; i < g.n_theta; ++i) {
      const double t = g.angle((k * i) % g.n_theta);
      const double c = std::cos(t);
      const double s = std::sin(t);
      for (int j = 0; j < g.n_r; ++j) {
        if (k == 0) {
          f.at(j, i) += y0 * modes.mode(0, 1)[j];
        } else {
          f.at(j, i) += yk * (c * modes.mode(k, 1)[j] + s * modes.mode(k, 2)[j]);
        }
      }
    }
  }
  return f;
}

EndpointChoice endpoint_policy(int k, const DecayClass& dc) {
  const double k1 = snap_integer(dc.k1, 1e-9);
  EndpointChoice e;
  e.first = (k + k1 > 2.0) ? Endpoint::Infinity : Endpoint::Reference;
  e.second = (k1 > k + 2.0) ? Endpoint::Infinity : Endpoint::Reference;
  return e;
}

std::vector<double> mode_particular_solution(int k, const AnnulusGrid& grid,
                                             const std::vector<double>& b, const DecayClass& dc,
                                             const ModeOptions& opts) {
  grid.validate();
  if (k < 0) fail(ErrorCode::InvalidArgument, "negative mode index");
  if (static_cast<int>(b.size()) != grid.n_r) {
    fail(ErrorCode::InvalidArgument, "mode samples do not match the radial grid");
  }
  const double rho = opts.reference_radius;
  if (!(rho > 0.0 && rho <= grid.r_min)) {
    fail(ErrorCode::InvalidArgument, "reference radius " + fmt_num(rho) + " must lie in (0, r_min]");
  }
  const int n = grid.n_r;
  const double h = grid.step();
  const std::vector<double> r = grid.radii();
  const EndpointChoice ends = endpoint_policy(k, dc);

  const double q_tail = fit_power(grid, b, true).value_or(dc.k1);
  const double p_head = fit_power(grid, b, false).value_or(dc.k1);

  // Integral of t^alpha (ln t)^log b(t) from the chosen endpoint to each r_j.
  auto integral = [&](const Weighted& w, Endpoint end) {
    std::vector<double> f(n);
    for (int j = 0; j < n; ++j) {
      f[j] = std::pow(r[j], w.alpha + 1.0) * b[j];
      if (w.with_log) f[j] *= std::log(r[j]);
    }
    std::vector<double> out(n);
    if (end == Endpoint::Infinity) {
      const std::vector<double> suf = suffix_integral(f, h);
      const double tail = tail_integral(w, b[n - 1], grid.r_max, q_tail, k);
      for (int j = 0; j < n; ++j) out[j] = -(suf[j] + tail);
    } else {
      const std::vector<double> pre = prefix_integral(f, h);
      const double head = head_integral(w, b[0], grid.r_min, rho, p_head);
      for (int j = 0; j < n; ++j) out[j] = head + pre[j];
    }
    return out;
  };

  std::vector<double> a(n);
  if (k == 0) {
    const std::vector<double> i1 = integral({1.0, false}, ends.first);
    const std::vector<double> i2 = integral({1.0, true}, ends.second);
    for (int j = 0; j < n; ++j) a[j] = std::log(r[j]) * i1[j] - i2[j];
  } else {
    const std::vector<double> i1 = integral({1.0 - k, false}, ends.first);
    const std::vector<double> i2 = integral({1.0 + k, false}, ends.second);
    for (int j = 0; j < n; ++j) {
      a[j] = (std::pow(r[j], k) * i1[j] - std::pow(r[j], -k) * i2[j]) / (2.0 * k);
    }
  }
  return a;
}

ScalarField discrete_laplacian(const ScalarField& v) {
  const AnnulusGrid& g = v.grid;
  const double h = g.step();
  const double dt = 2.0 * kPi / g.n_theta;
  if (h > 0.5 || dt > kPi / 4.0 + 1e-15) {
    fail(ErrorCode::GridTooCoarse, "steps ln r=" + fmt_num(h) + ", theta=" + fmt_num(dt) +
                                       " exceed the stencil limits 0.5 and pi/4");
  }
  ScalarField out{g, std::vector<double>(v.values.size(), 0.0)};
  for (int j = 1; j + 1 < g.n_r; ++j) {
    const double r = g.radius(j);
    const double inv_r2 = 1.0 / (r * r);
    for (int i = 0; i < g.n_theta; ++i) {
      const int ip = (i + 1) % g.n_theta;
      const int im = (i + g.n_theta - 1) % g.n_theta;
      const double ds = (v.at(j + 1, i) - 2.0 * v.at(j, i) + v.at(j - 1, i)) / (h * h);
      const double dth = (v.at(j, ip) - 2.0 * v.at(j, i) + v.at(j, im)) / (dt * dt);
      out.at(j, i) = inv_r2 * (ds + dth);
    }
  }
  return out;
}

double laplacian_residual(const ScalarField& v, const ScalarField& g) {
  if (v.grid.n_r != g.grid.n_r || v.grid.n_theta != g.grid.n_theta ||
      v.grid.r_min != g.grid.r_min || v.grid.r_max != g.grid.r_max) {
    fail(ErrorCode::InvalidArgument, "fields live on different grids");
  }
  const ScalarField lap = discrete_laplacian(v);
  double worst = 0.0;
  for (int j = 1; j + 1 < v.grid.n_r; ++j) {
    for (int i = 0; i < v.grid.n_theta; ++i) {
      worst = std::max(worst, std::fabs(lap.at(j, i) - g.at(j, i)));
    }
  }
  return worst;
}

std::vector<double> circle_l2_norms(const ScalarField& f) {
  const AnnulusGrid& g = f.grid;
  const double w = 2.0 * kPi / g.n_theta;
  std::vector<double> out(g.n_r);
  for (int j = 0; j < g.n_r; ++j) {
    double acc = 0.0;
    for (int i = 0; i < g.n_theta; ++i) acc += f.at(j, i) * f.at(j, i);
    out[j] = std::sqrt(w * acc);
  }
  return out;
}

PoissonSolution solve_exterior_poisson(const ScalarField& g, const PoissonOptions& opts) {
  g.grid.validate();
  const int k_max = std::min(opts.k_max, g.grid.n_theta / 2 - 1);
  PoissonSolution sol;
  sol.source_modes = fourier_decompose(g, k_max);

  double gmax = 0.0;
  for (double v : g.values) gmax = std::max(gmax, std::fabs(v));

  if (opts.decay) {
    sol.source_class = *opts.decay;
  } else if (gmax > 0.0) {
    const DecayFit fit = measure_decay_class(g.grid.radii(), circle_l2_norms(g));
    sol.source_class.k1 = snap_integer(fit.p, 1e-6);
    sol.source_class.k2 = std::max(0.0, fit.q);
  }
  sol.source_class.validate();

  sol.solution_modes.grid = g.grid;
  sol.solution_modes.k_max = k_max;
  sol.solution_modes.coeffs.assign(sol.source_modes.coeffs.size(),
                                   std::vector<double>(g.grid.n_r, 0.0));
  for (int k = 0; k <= k_max; ++k) {
    for (int m = 1; m <= (k == 0 ? 1 : 2); ++m) {
      const std::vector<double>& b = sol.source_modes.mode(k, m);
      double bmax = 0.0;
      for (double v : b) bmax = std::max(bmax, std::fabs(v));
      if (!(bmax >= 1e-14 * gmax) || bmax == 0.0) continue;
      sol.solution_modes.mode(k, m) =
          mode_particular_solution(k, g.grid, b, sol.source_class, opts.mode);
      ++sol.modes_solved;
    }
  }
  sol.v = assemble(sol.solution_modes);
  return sol;
}

}  // namespace gg
