#include "field_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "error.hpp"
#include "radial.hpp"

namespace gg {

std::string fmt_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
  os << "r,theta,value\n";
  for (int j = 0; j < f.grid.n_r; ++j) {
    const std::string r = fmt_exact(f.grid.radius(j));
    for (int i = 0; i < f.grid.n_theta; ++i) {
      os << r << ',' << fmt_exact(f.grid.angle(i)) << ',' << fmt_exact(f.at(j, i)) << '\n';
    }
  }
}

namespace {

struct Row {
  double r, theta, value;
};

bool parse_row(const std::string& line, Row& row) {
  std::istringstream ss(line);
  std::string a, b, c;
  if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c)) return false;
  try {
    std::size_t pa, pb, pc;
    row.r = std::stod(a, &pa);
    row.theta = std::stod(b, &pb);
    row.value = std::stod(c, &pc);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

std::vector<double> distinct(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() || std::fabs(x - out.back()) > 1e-12 * std::max(1.0, std::fabs(x))) {
      out.push_back(x);
    }
  }
  return out;
}

std::size_t locate(const std::vector<double>& keys, double x) {
  auto it = std::lower_bound(keys.begin(), keys.end(), x - 1e-12 * std::max(1.0, std::fabs(x)));
  return static_cast<std::size_t>(it - keys.begin());
}

}  // namespace

ScalarField read_field_csv(std::istream& is) {
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Row row;
    if (!parse_row(line, row)) {
      if (lineno == 1) continue;  // header
      fail(ErrorCode::IoError, "line " + std::to_string(lineno) + ": expected r,theta,value");
    }
    rows.push_back(row);
  }
  if (rows.empty()) fail(ErrorCode::IoError, "no data rows");

  std::vector<double> rs, ts;
  for (const Row& row : rows) {
    rs.push_back(row.r);
    ts.push_back(row.theta);
  }
  const std::vector<double> radii = distinct(rs);
  const std::vector<double> angles = distinct(ts);
  if (radii.size() * angles.size() != rows.size()) {
    fail(ErrorCode::IoError, std::to_string(rows.size()) + " rows do not fill a " +
                                 std::to_string(radii.size()) + " x " +
                                 std::to_string(angles.size()) + " grid");
  }

  AnnulusGrid grid;
  grid.r_min = radii.front();
  grid.r_max = radii.back();
  grid.n_r = static_cast<int>(radii.size());
  grid.n_theta = static_cast<int>(angles.size());
  try {
    grid.validate();
  } catch (const Error& e) {
    fail(ErrorCode::IoError, "grid: " + e.detail());
  }
  for (int j = 0; j < grid.n_r; ++j) {
    if (std::fabs(radii[j] - grid.radius(j)) > 1e-9 * radii[j]) {
      fail(ErrorCode::IoError, "radii are not log-spaced near r=" + fmt_num(radii[j]));
    }
  }
  for (int i = 0; i < grid.n_theta; ++i) {
    if (std::fabs(angles[i] - grid.angle(i)) > 1e-9) {
      fail(ErrorCode::IoError, "angles are not uniform in [0, 2pi) near theta=" + fmt_num(angles[i]));
    }
  }

  ScalarField f{grid, std::vector<double>(rows.size(), 0.0)};
  std::vector<char> seen(rows.size(), 0);
  for (const Row& row : rows) {
    const std::size_t k = locate(radii, row.r) * angles.size() + locate(angles, row.theta);
    if (seen[k]) {
      fail(ErrorCode::IoError, "duplicate node r=" + fmt_num(row.r) + ", theta=" + fmt_num(row.theta));
    }
    seen[k] = 1;
    f.values[k] = row.value;
  }
  return f;
}

void write_profile_csv(std::ostream& os, const RadialProfile& p) {
  os << "r,u,du,ddu\n";
  for (std::size_t j = 0; j < p.r.size(); ++j) {
    os << fmt_exact(p.r[j]) << ',' << fmt_exact(p.u[j]) << ',' << fmt_exact(p.du[j]) << ','
       << fmt_exact(p.ddu[j]) << '\n';
  }
}

}  // namespace gg
