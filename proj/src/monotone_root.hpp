#pragma once

#include <functional>
#include <limits>

namespace gg {

struct MonotoneRootOptions {
  /// Converged once |g(x)| <= abs_tol, or once Newton steps stall at
  /// machine precision.
  double abs_tol = 1e-12;
  int max_iter = 200;
  /// Closest approach to an open lower bound during bracketing.
  double bound_gap = 1e-10;
  /// Bracket expansion stops at this distance from the start point.
  double max_reach = 1e12;
};

/// Root of a strictly increasing function g on (lower, +inf), found by
/// bracketing with geometric expansion, then Newton steps safeguarded by
/// bisection. `lower` may be -inf. Throws NoRoot when g has no sign change
/// on the reachable part of the ray.
double solve_increasing(const std::function<double(double)>& g,
                        const std::function<double(double)>& dg, double lower, double guess,
                        const MonotoneRootOptions& opts = {});

}  // namespace gg
