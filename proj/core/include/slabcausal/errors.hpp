#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slabcausal {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs violate a documented precondition (bad parameters, malformed files).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A named numerical guard tripped. `guard()` identifies the check and
/// `value()` the offending quantity so callers can report both.
class NumericalGuardError : public Error {
 public:
  NumericalGuardError(std::string guard, double value, const std::string& detail);

  const std::string& guard() const noexcept { return guard_; }
  double value() const noexcept { return value_; }

 private:
  std::string guard_;
  double value_;
};

#define SLABCAUSAL_GUARD_ERROR(Name)                                        \
  class Name : public NumericalGuardError {                                 \
   public:                                                                  \
    using NumericalGuardError::NumericalGuardError;                         \
  }

SLABCAUSAL_GUARD_ERROR(PoleError);
SLABCAUSAL_GUARD_ERROR(RangeError);
SLABCAUSAL_GUARD_ERROR(TailDominanceError);
SLABCAUSAL_GUARD_ERROR(SingularityError);
SLABCAUSAL_GUARD_ERROR(BranchPointError);
SLABCAUSAL_GUARD_ERROR(DenominatorZeroError);
SLABCAUSAL_GUARD_ERROR(ResolutionError);
SLABCAUSAL_GUARD_ERROR(WraparoundError);
SLABCAUSAL_GUARD_ERROR(AliasingError);
SLABCAUSAL_GUARD_ERROR(BoundaryError);
SLABCAUSAL_GUARD_ERROR(PhaseStepError);
SLABCAUSAL_GUARD_ERROR(UnsupportedModelError);

#undef SLABCAUSAL_GUARD_ERROR

}  // namespace slabcausal
