#include "slabcausal/errors.hpp"

#include <fmt/format.h>

namespace slabcausal {

NumericalGuardError::NumericalGuardError(std::string guard, double value, const std::string& detail)
    : Error(fmt::format("{} (guard '{}', value {:.6g})", detail, guard, value)),
      guard_(std::move(guard)),
      value_(value) {}

}  // namespace slabcausal
