#pragma once

#include <vector>

#include <Eigen/Dense>

namespace gg {

/// Ordinary least squares with diagnostics.
struct LsqResult {
  Eigen::VectorXd coef;
  double condition = 0.0;  // 2-norm condition of the column-normalized design
  double rms = 0.0;        // root-mean-square residual
};

/// Solves min |X c - y| by column-pivoted QR. Columns are scaled to unit norm
/// before the condition estimate so that it reflects collinearity, not units.
LsqResult least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

/// Model |v| ~ c0 * r^(-p) * (ln r)^q.
struct DecayFit {
  double c0 = 0.0;
  double p = 0.0;
  double q = 0.0;
  double p_raw = 0.0;  // before q was snapped
  double q_raw = 0.0;
  bool q_snapped = false;
  bool sign_change = false;  // samples were not of one sign
  double rms = 0.0;
};

/// Regression of ln|v| on (1, ln r, ln ln r). When q_raw lies within
/// `snap_tol` of one of `snap_to`, q is fixed there and (c0, p) refitted.
/// Needs >= 16 samples with r > 1 spanning a factor >= 10 (ILL_CONDITIONED).
DecayFit decay_fit_samples(const std::vector<double>& r, const std::vector<double>& v,
                           const std::vector<double>& snap_to, double snap_tol);

/// decay_fit with q snapped to {0, 1, 2} within 0.15.
DecayFit decay_fit(const std::vector<double>& r, const std::vector<double>& v);

/// Same regression on circle norms; k2 is rounded to the nearest
/// half-integer when within 0.1. p is k1 and q is k2 in the result.
DecayFit measure_decay_class(const std::vector<double>& r, const std::vector<double>& norms);

}  // namespace gg
