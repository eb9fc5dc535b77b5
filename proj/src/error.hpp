#pragma once

#include <stdexcept>
#include <string>

namespace gg {

enum class ErrorCode {
  OutOfRange,
  DomainViolation,
  NotPositiveDefinite,
  NoRoot,
  InadmissibleInput,
  Aliasing,
  TailDivergent,
  GridTooCoarse,
  IllConditioned,
  NegativeRadicand,
  StepTooLarge,
  SingularP,
  WindowTooNarrow,
  InvalidArgument,
  IoError,
};

/// Upper-case identifier of an error code, e.g. "DOMAIN_VIOLATION".
const char* error_name(ErrorCode code);

/// Base exception of the library. what() is "<NAME>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// An eigenvalue at or below the semi-convexity bound of the active branch.
class DomainViolation : public Error {
 public:
  DomainViolation(int index, double value, double bound);

  int index() const noexcept { return index_; }
  double value() const noexcept { return value_; }
  double bound() const noexcept { return bound_; }

 private:
  int index_;
  double value_;
  double bound_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

std::string fmt_num(double v);

}  // namespace gg
