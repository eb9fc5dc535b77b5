#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "loglog.hpp"

namespace gg {

/// Log-spaced radii times uniform angles on r_min <= r <= r_max.
struct AnnulusGrid {
  double r_min = 2.0;
  double r_max = 200.0;
  int n_r = 256;
  int n_theta = 32;

  /// INVALID_ARGUMENT unless 1 < r_min < r_max, n_r >= 16, n_theta >= 8 even.
  void validate() const;
  /// Spacing in s = ln r.
  double step() const;
  double radius(int j) const;
  double angle(int i) const;
  std::vector<double> radii() const;
};

/// Samples indexed [j * n_theta + i] for radius j and angle i.
struct ScalarField {
  AnnulusGrid grid;
  std::vector<double> values;

  double& at(int j, int i) { return values[static_cast<std::size_t>(j) * grid.n_theta + i]; }
  double at(int j, int i) const { return values[static_cast<std::size_t>(j) * grid.n_theta + i]; }
};

ScalarField sample_field(const AnnulusGrid& grid, const std::function<double(double, double)>& fn);

/// Source bound r^-k1 (ln r)^k2.
struct DecayClass {
  double k1 = 3.0;
  double k2 = 0.0;

  /// INVALID_ARGUMENT unless k1 > 0 and k2 >= 0.
  void validate() const;
};

/// Radial coefficient profiles against the orthonormal circle basis
/// 1/sqrt(2 pi), cos(k t)/sqrt(pi), sin(k t)/sqrt(pi).
struct FourierModes {
  AnnulusGrid grid;
  int k_max = 0;
  /// coeffs[mode_index(k, m)][j]
  std::vector<std::vector<double>> coeffs;

  /// k = 0 has only m = 1; k >= 1 uses m = 1 (cos) and m = 2 (sin).
  static int mode_index(int k, int m) { return k == 0 ? 0 : 2 * k - 2 + m; }
  const std::vector<double>& mode(int k, int m) const { return coeffs[mode_index(k, m)]; }
  std::vector<double>& mode(int k, int m) { return coeffs[mode_index(k, m)]; }
};

/// Trapezoid projection; ALIASING if k_max >= n_theta/2.
FourierModes fourier_decompose(const ScalarField& field, int k_max);

/// Pointwise synthesis on the modes' grid.
ScalarField assemble(const FourierModes& modes);

enum class Endpoint { Reference, Infinity };

/// Lower limits of the two integrals in the variation-of-parameters
/// representation, against weights t^(1-k) and t^(1+k) (k = 0: t and t ln t).
struct EndpointChoice {
  Endpoint first = Endpoint::Reference;
  Endpoint second = Endpoint::Reference;
};

/// first is infinite iff k + k1 > 2, second iff k1 > k + 2. k1 within 1e-9
/// of an integer counts as that integer.
EndpointChoice endpoint_policy(int k, const DecayClass& dc);

struct ModeOptions {
  /// Finite lower limit of the quadratures.
  double reference_radius = 1.0;
};

/// Particular solution of a'' + a'/r - k^2 a/r^2 = b on the grid radii.
/// Infinite-endpoint integrals get a power-law tail fitted on the last decade;
/// a reference radius below r_min gets a power-law head fitted on the first.
/// TAIL_DIVERGENT if a fitted tail is not integrable.
std::vector<double> mode_particular_solution(int k, const AnnulusGrid& grid,
                                             const std::vector<double>& b, const DecayClass& dc,
                                             const ModeOptions& opts = {});

/// max over interior nodes of |Lap_h v - g| with the five-point polar stencil
/// in (ln r, theta). GRID_TOO_COARSE when the steps exceed 0.5 in ln r or
/// pi/4 in angle.
double laplacian_residual(const ScalarField& v, const ScalarField& g);

/// Discrete Laplacian at every interior radius (edges left at zero).
ScalarField discrete_laplacian(const ScalarField& v);

/// L2(S^1) norm on each grid circle.
std::vector<double> circle_l2_norms(const ScalarField& f);

struct PoissonOptions {
  int k_max = 16;
  ModeOptions mode;
  /// Source class for the endpoint policy; measured from g when absent.
  std::optional<DecayClass> decay;
};

struct PoissonSolution {
  ScalarField v;
  FourierModes source_modes;
  FourierModes solution_modes;
  DecayClass source_class;
  int modes_solved = 0;
};

PoissonSolution solve_exterior_poisson(const ScalarField& g, const PoissonOptions& opts = {});

}  // namespace gg
