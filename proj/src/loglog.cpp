#include "loglog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace gg {

LsqResult least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() < x.cols() || x.rows() != y.rows()) {
    fail(ErrorCode::IllConditioned, "design has " + std::to_string(x.rows()) + " rows for " +
                                        std::to_string(x.cols()) + " unknowns");
  }
  Eigen::VectorXd scale(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double n = x.col(j).norm();
    scale(j) = n > 0.0 ? 1.0 / n : 1.0;
  }
  const Eigen::MatrixXd xs = x * scale.asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xs);
  const auto& sv = svd.singularValues();
  LsqResult out;
  const double smin = sv(sv.size() - 1);
  out.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  const Eigen::VectorXd cs = xs.colPivHouseholderQr().solve(y);
  out.coef = scale.asDiagonal() * cs;
  out.rms = std::sqrt((x * out.coef - y).squaredNorm() / static_cast<double>(y.size()));
  return out;
}

namespace {

struct Prepared {
  Eigen::VectorXd lr, llr, lv;
  bool sign_change = false;
};

Prepared prepare(const std::vector<double>& r, const std::vector<double>& v) {
  if (r.size() != v.size()) fail(ErrorCode::InvalidArgument, "radius/value length mismatch");
  std::vector<double> lr, llr, lv;
  bool pos = false, neg = false;
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 1.0)) fail(ErrorCode::InvalidArgument, "decay fit needs r > 1, got " + fmt_num(r[i]));
    if (v[i] > 0.0) pos = true;
    if (v[i] < 0.0) neg = true;
    const double m = std::fabs(v[i]);
    if (!(m > 0.0) || !std::isfinite(m)) continue;
    lr.push_back(std::log(r[i]));
    llr.push_back(std::log(std::log(r[i])));
    lv.push_back(std::log(m));
    rmin = std::min(rmin, r[i]);
    rmax = std::max(rmax, r[i]);
  }
  if (lr.size() < 16) {
    fail(ErrorCode::IllConditioned, std::to_string(lr.size()) + " usable samples, need 16");
  }
  if (rmax < 10.0 * rmin) {
    fail(ErrorCode::IllConditioned,
         "radii span a factor " + fmt_num(rmax / rmin) + ", need at least 10");
  }
  Prepared p;
  p.lr = Eigen::Map<Eigen::VectorXd>(lr.data(), lr.size());
  p.llr = Eigen::Map<Eigen::VectorXd>(llr.data(), llr.size());
  p.lv = Eigen::Map<Eigen::VectorXd>(lv.data(), lv.size());
  p.sign_change = pos && neg;
  return p;
}

}  // namespace

DecayFit decay_fit_samples(const std::vector<double>& r, const std::vector<double>& v,
                           const std::vector<double>& snap_to, double snap_tol) {
  const Prepared s = prepare(r, v);
  const Eigen::Index n = s.lr.size();
  Eigen::MatrixXd x(n, 3);
  x.col(0).setOnes();
  x.col(1) = s.lr;
  x.col(2) = s.llr;
  const LsqResult full = least_squares(x, s.lv);

  DecayFit out;
  out.sign_change = s.sign_change;
  out.p_raw = -full.coef(1);
  out.q_raw = full.coef(2);
  out.p = out.p_raw;
  out.q = out.q_raw;
  out.c0 = std::exp(full.coef(0));
  out.rms = full.rms;

  double best = snap_tol;
  for (double t : snap_to) {
    const double gap = std::fabs(out.q_raw - t);
    if (gap <= best) {
      best = gap;
      out.q = t;
      out.q_snapped = true;
    }
  }
  if (out.q_snapped) {
    Eigen::MatrixXd x2(n, 2);
    x2.col(0).setOnes();
    x2.col(1) = s.lr;
    const LsqResult fixed = least_squares(x2, s.lv - out.q * s.llr);
    out.p = -fixed.coef(1);
    out.c0 = std::exp(fixed.coef(0));
    out.rms = fixed.rms;
  }
  return out;
}

DecayFit decay_fit(const std::vector<double>& r, const std::vector<double>& v) {
  return decay_fit_samples(r, v, {0.0, 1.0, 2.0}, 0.15);
}

DecayFit measure_decay_class(const std::vector<double>& r, const std::vector<double>& norms) {
  const DecayFit raw = decay_fit_samples(r, norms, {}, 0.0);
  const double half = std::round(2.0 * raw.q_raw) / 2.0;
  if (std::fabs(raw.q_raw - half) > 0.1) return raw;
  return decay_fit_samples(r, norms, {half}, 0.1);
}

}  // namespace gg
