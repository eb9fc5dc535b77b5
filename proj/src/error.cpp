#include "error.hpp"

#include <cstdio>

namespace gg {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OUT_OF_RANGE";
    case ErrorCode::DomainViolation: return "DOMAIN_VIOLATION";
    case ErrorCode::NotPositiveDefinite: return "NOT_POSITIVE_DEFINITE";
    case ErrorCode::NoRoot: return "NO_ROOT";
    case ErrorCode::InadmissibleInput: return "INADMISSIBLE_INPUT";
    case ErrorCode::Aliasing: return "ALIASING";
    case ErrorCode::TailDivergent: return "TAIL_DIVERGENT";
    case ErrorCode::GridTooCoarse: return "GRID_TOO_COARSE";
    case ErrorCode::IllConditioned: return "ILL_CONDITIONED";
    case ErrorCode::NegativeRadicand: return "NEGATIVE_RADICAND";
    case ErrorCode::StepTooLarge: return "STEP_TOO_LARGE";
    case ErrorCode::SingularP: return "SINGULAR_P";
    case ErrorCode::WindowTooNarrow: return "WINDOW_TOO_NARROW";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::IoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

DomainViolation::DomainViolation(int index, double value, double bound)
    : Error(ErrorCode::DomainViolation,
            "eigenvalue lam" + std::to_string(index + 1) + "=" + fmt_num(value) +
                " is not above the semi-convex bound " + fmt_num(bound)),
      index_(index),
      value_(value),
      bound_(bound) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace gg
