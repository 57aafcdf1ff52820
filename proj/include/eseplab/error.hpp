#pragma once

#include <stdexcept>
#include <string>

namespace eseplab {

enum class ErrorCode {
  NonPositiveRate,
  AffineMismatch,
  MissingField,
  InvalidInitialState,
  TimeOutOfRange,
  ExplosionGuard,
  NonMonotoneKernel,
  DomainViolation,
  BranchViolation,
  Unstable,
  DimensionOverflow,
  StepSizeUnderflow,
  NegativeTime,
  EmptySample,
  CapacityMissing,
  UnknownClaim,
  DuplicateClaim,
  ConfigInvalid,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::invalid_argument {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::invalid_argument(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eseplab
