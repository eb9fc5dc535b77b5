#pragma once

#include <array>
#include <cmath>

namespace gg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm2() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

/// Symmetric 2x2 matrix stored by its three independent entries.
struct SymMat2 {
  double m11 = 0.0;
  double m12 = 0.0;
  double m22 = 0.0;

  static SymMat2 identity() { return {1.0, 0.0, 1.0}; }
  static SymMat2 diag(double d1, double d2) { return {d1, 0.0, d2}; }
  static SymMat2 scalar(double s) { return {s, 0.0, s}; }
  /// v v^T
  static SymMat2 outer(Vec2 v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }

  double trace() const { return m11 + m22; }
  double det() const { return m11 * m22 - m12 * m12; }
  Vec2 apply(Vec2 v) const { return {m11 * v.x + m12 * v.y, m12 * v.x + m22 * v.y}; }
  double quad_form(Vec2 v) const { return v.dot(apply(v)); }
  /// Max-abs entry norm.
  double max_abs() const { return std::fmax(std::fabs(m11), std::fmax(std::fabs(m12), std::fabs(m22))); }
};

inline SymMat2 operator+(const SymMat2& a, const SymMat2& b) {
  return {a.m11 + b.m11, a.m12 + b.m12, a.m22 + b.m22};
}
inline SymMat2 operator-(const SymMat2& a, const SymMat2& b) {
  return {a.m11 - b.m11, a.m12 - b.m12, a.m22 - b.m22};
}
inline SymMat2 operator*(double s, const SymMat2& a) { return {s * a.m11, s * a.m12, s * a.m22}; }

/// General (not necessarily symmetric) 2x2 product, row-major.
using Mat2 = std::array<double, 4>;
Mat2 multiply(const SymMat2& a, const SymMat2& b);

/// S * M * S for symmetric S and M; the result is symmetric.
SymMat2 congruence(const SymMat2& s, const SymMat2& m);

/// Ordered eigen-decomposition M = R diag(lam1, lam2) R^T with
/// R(theta) = [[cos, sin], [-sin, cos]] and theta_e in [0, pi).
struct Spectrum {
  double lam1 = 0.0;
  double lam2 = 0.0;
  double theta_e = 0.0;

  std::array<double, 2> values() const { return {lam1, lam2}; }
  SymMat2 reconstruct() const { return with_values(lam1, lam2); }
  /// Same eigenbasis, new eigenvalues (lam1 slot first).
  SymMat2 with_values(double v1, double v2) const;

  template <class Fn>
  SymMat2 map(Fn&& fn) const {
    return with_values(fn(lam1), fn(lam2));
  }
};

Spectrum eigs(const SymMat2& m);

/// Eigenvalue increments lambda_i(a + da) - lambda_i(a), computed without
/// forming the difference of two large numbers.
std::array<double, 2> eig_increments(const SymMat2& a, const SymMat2& da);

}  // namespace gg
