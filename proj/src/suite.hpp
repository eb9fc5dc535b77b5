#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gg {

struct SuiteRow {
  std::string check;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;

  bool pass() const;
};

/// Check groups in run order.
const std::vector<std::string>& suite_groups();

/// Runs every group, or only `only` when non-empty (INVALID_ARGUMENT if it
/// names no group). Row names are "<group>" or "<group>:<detail>".
SuiteResult run_suite(std::uint64_t seed, const std::string& only = "");

/// Runs one group and appends its rows.
void run_suite_group(const std::string& group, std::uint64_t seed, SuiteResult& out);

/// check,expected,observed,tolerance,pass with %.17g numbers.
std::string suite_csv(const SuiteResult& r);

}  // namespace gg
