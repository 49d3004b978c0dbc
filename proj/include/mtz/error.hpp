#pragma once

#include <stdexcept>
#include <string>

namespace mtz {

enum class ErrorCode {
  InvalidArgument,
  NotPrime,
  NonUnitDenominator,
  NonUnit,
  PrecisionMismatch,
  PartsMismatch,
  IrregularModulus,
  PreconditionViolated,
  NonIntegral,
  ExactLimitExceeded,
  UnsupportedDepth,
  DivergentTerm,
  UnsupportedTerm,
  ConfigInvalid,
  PersistenceFailure,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above; the C
/// API maps them one-to-one onto status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace mtz
