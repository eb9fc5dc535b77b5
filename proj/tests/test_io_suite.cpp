#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "field_io.hpp"
#include "poisson.hpp"
#include "radial.hpp"
#include "suite.hpp"

using namespace gg;

namespace {

ScalarField sample() {
  return sample_field(AnnulusGrid{2.0, 50.0, 16, 8},
                      [](double r, double t) { return std::cos(t) / r + 1.0 / 3.0 + std::log(r); });
}

ErrorCode read_code(const std::string& text) {
  std::istringstream is(text);
  try {
    read_field_csv(is);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("fmt_exact roundtrips doubles") {
  for (double v : {1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.1}) CHECK(std::stod(fmt_exact(v)) == v);
}

TEST_CASE("field CSV roundtrip is exact") {
  const ScalarField f = sample();
  std::ostringstream os;
  write_field_csv(os, f);
  std::istringstream is(os.str());
  const ScalarField g = read_field_csv(is);
  CHECK(g.grid.n_r == f.grid.n_r);
  CHECK(g.grid.n_theta == f.grid.n_theta);
  CHECK(g.grid.r_min == f.grid.r_min);
  CHECK(g.grid.r_max == f.grid.r_max);
  CHECK(g.values == f.values);
}

TEST_CASE("row order does not matter") {
  std::ostringstream os;
  write_field_csv(os, sample());
  std::istringstream in(os.str());
  std::string header, line;
  std::getline(in, header);
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  std::reverse(rows.begin(), rows.end());
  std::string text = header + "\n";
  for (const auto& r : rows) text += r + "\n";
  std::istringstream is(text);
  CHECK(read_field_csv(is).values == sample().values);
}

TEST_CASE("malformed field CSV") {
  std::ostringstream os;
  write_field_csv(os, sample());
  const std::string good = os.str();
  const std::size_t second = good.find('\n', good.find('\n') + 1);
  const std::string first_row = good.substr(good.find('\n') + 1, second - good.find('\n'));
  CHECK(read_code(good + first_row) == ErrorCode::IoError);
  CHECK(read_code("r,theta,value\n2,0,abc\n") == ErrorCode::IoError);
  CHECK(read_code("") == ErrorCode::IoError);
  CHECK(read_code(good.substr(0, second + 1)) == ErrorCode::IoError);
}

TEST_CASE("profile CSV header") {
  const RadialProfile p = integrate_radial(tau_params(0), RadialRhs{0.0, {}}, 1.0, 0.5, 1.0, 10.0, 20);
  std::ostringstream os;
  write_profile_csv(os, p);
  const std::string text = os.str();
  CHECK(text.rfind("r,u,du,ddu\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(p.r.size()) + 1);
}

TEST_CASE("suite selection") {
  const SuiteResult one = run_suite(11, "p-identity");
  REQUIRE(one.rows.size() == 1);
  CHECK(one.rows[0].check == "p-identity");
  CHECK(one.pass());
  CHECK_THROWS_AS(run_suite(11, "no-such-group"), Error);
  CHECK(suite_groups().size() == 9);
}

TEST_CASE("suite CSV is deterministic and seed-independent in outcome") {
  for (const char* g : {"p-identity", "unified-derivative", "arctan-identity"}) {
    const SuiteResult a = run_suite(11, g);
    const SuiteResult b = run_suite(11, g);
    CHECK(suite_csv(a) == suite_csv(b));
    const SuiteResult c = run_suite(7, g);
    CHECK(c.pass() == a.pass());
  }
  const std::string csv = suite_csv(run_suite(3, "p-identity"));
  CHECK(csv.rfind("check,expected,observed,tolerance,pass\n", 0) == 0);
  CHECK(csv.find(",true\n") != std::string::npos);
}
