#include "monotone_root.hpp"

#include <cmath>

#include "error.hpp"

namespace gg {

double solve_increasing(const std::function<double(double)>& g,
                        const std::function<double(double)>& dg, double lower, double guess,
                        const MonotoneRootOptions& opts) {
  const bool bounded = std::isfinite(lower);
  double x = guess;
  if (!std::isfinite(x) || (bounded && x <= lower)) {
    x = bounded ? lower + 1.0 : 0.0;
  }
  double gx = g(x);
  if (gx == 0.0 || std::fabs(gx) < opts.abs_tol) return x;

  double lo, hi, glo, ghi;
  if (gx < 0.0) {
    lo = x;
    glo = gx;
    double step = std::fmax(1.0, std::fabs(x));
    hi = x + step;
    ghi = g(hi);
    while (ghi < 0.0) {
      lo = hi;
      glo = ghi;
      step *= 2.0;
      if (step > opts.max_reach) {
        fail(ErrorCode::NoRoot, "target above the attainable values (last g=" + fmt_num(ghi) +
                                    " at x=" + fmt_num(hi) + ")");
      }
      hi = x + step;
      ghi = g(hi);
    }
  } else {
    hi = x;
    ghi = gx;
    if (bounded) {
      double gap = x - lower;
      lo = lower + 0.5 * gap;
      glo = g(lo);
      while (glo > 0.0) {
        hi = lo;
        ghi = glo;
        gap *= 0.5;
        if (gap < opts.bound_gap) {
          const double edge = lower + opts.bound_gap;
          const double gedge = g(edge);
          if (gedge > 0.0) {
            fail(ErrorCode::NoRoot, "target below the attainable values (g=" + fmt_num(gedge) +
                                        " at bound+" + fmt_num(opts.bound_gap) + ")");
          }
          lo = edge;
          glo = gedge;
          break;
        }
        lo = lower + 0.5 * gap;
        glo = g(lo);
      }
    } else {
      double step = std::fmax(1.0, std::fabs(x));
      lo = x - step;
      glo = g(lo);
      while (glo > 0.0) {
        hi = lo;
        ghi = glo;
        step *= 2.0;
        if (step > opts.max_reach) {
          fail(ErrorCode::NoRoot, "target below the attainable values (last g=" + fmt_num(glo) +
                                      " at x=" + fmt_num(lo) + ")");
        }
        lo = x - step;
        glo = g(lo);
      }
    }
  }
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;

  // Safeguarded Newton inside [lo, hi], starting from the bracket end
  // nearest the guess.
  x = (gx < 0.0) ? lo : hi;
  gx = (gx < 0.0) ? glo : ghi;
  for (int it = 0; it < opts.max_iter; ++it) {
    const double d = dg(x);
    double xn = (d > 0.0 && std::isfinite(d)) ? x - gx / d : std::nan("");
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    const double step = xn - x;
    x = xn;
    gx = g(x);
    if (gx == 0.0) return x;
    if (gx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (std::fabs(gx) <= opts.abs_tol) return x;
    const double scale = std::fmax(std::fabs(x), std::numeric_limits<double>::min());
    if (std::fabs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * scale ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
      return x;
    }
  }
  fail(ErrorCode::NoRoot, "no convergence after " + std::to_string(opts.max_iter) +
                              " iterations (residual " + fmt_num(gx) + ")");
}

}  // namespace gg
