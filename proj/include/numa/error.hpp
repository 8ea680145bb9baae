#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace numa {

using Integer = mpz_class;
using Rational = mpq_class;

enum class ErrorCode {
  NotNumerical,
  ArityMismatch,
  InconsistentData,
  TruncationTooSmall,
  NotAGroup,
  NotACocycle,
  NonAdditiveFaces,
  InvalidTwisting,
  PrecisionExhausted,
  NonNilpotentAction,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

// Domain failure raised by every module. The C API maps `code()` onto its
// status enum one-to-one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace numa
