#include "sym2.hpp"

#include <numbers>

namespace gg {

Mat2 multiply(const SymMat2& a, const SymMat2& b) {
  return {a.m11 * b.m11 + a.m12 * b.m12, a.m11 * b.m12 + a.m12 * b.m22,
          a.m12 * b.m11 + a.m22 * b.m12, a.m12 * b.m12 + a.m22 * b.m22};
}

SymMat2 congruence(const SymMat2& s, const SymMat2& m) {
  const Mat2 sm = multiply(s, m);
  // (S M) S, keeping the upper triangle.
  return {sm[0] * s.m11 + sm[1] * s.m12, sm[0] * s.m12 + sm[1] * s.m22,
          sm[2] * s.m12 + sm[3] * s.m22};
}

SymMat2 Spectrum::with_values(double v1, double v2) const {
  const double c = std::cos(theta_e);
  const double s = std::sin(theta_e);
  return {c * c * v1 + s * s * v2, s * c * (v2 - v1), s * s * v1 + c * c * v2};
}

Spectrum eigs(const SymMat2& m) {
  const double mean = 0.5 * (m.m11 + m.m22);
  const double half_diff = 0.5 * (m.m22 - m.m11);
  const double rad = std::hypot(half_diff, m.m12);
  Spectrum sp;
  sp.lam1 = mean - rad;
  sp.lam2 = mean + rad;
  // M12 = sin(2t)/2 (lam2-lam1), M22-M11 = cos(2t)(lam2-lam1).
  double theta = 0.5 * std::atan2(m.m12, half_diff);
  if (theta < 0.0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  sp.theta_e = theta;
  return sp;
}

std::array<double, 2> eig_increments(const SymMat2& a, const SymMat2& da) {
  const double dmean = 0.5 * (da.m11 + da.m22);
  const double p = 0.5 * (a.m22 - a.m11);
  const double q = a.m12;
  const double dp = 0.5 * (da.m22 - da.m11);
  const double dq = da.m12;
  const double rad_a = std::hypot(p, q);
  const double rad_b = std::hypot(p + dp, q + dq);
  double drad;
  if (rad_a + rad_b == 0.0) {
    drad = 0.0;
  } else {
    // rad_b^2 - rad_a^2 expanded so the O(1) parts cancel exactly.
    drad = ((2.0 * p + dp) * dp + (2.0 * q + dq) * dq) / (rad_a + rad_b);
  }
  return {dmean - drad, dmean + drad};
}

}  // namespace gg
