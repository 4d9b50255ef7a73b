#pragma once

#include <stdexcept>
#include <string>

namespace scenerylab {

// Base of every numeric failure. name() is the stable identifier printed by
// the command line tool.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* name() const noexcept { return "NumericError"; }
};

#define SCENERYLAB_NUMERIC_ERROR(Name)                                    \
  class Name : public NumericError {                                      \
   public:                                                                \
    using NumericError::NumericError;                                     \
    const char* name() const noexcept override { return #Name; }          \
  }

SCENERYLAB_NUMERIC_ERROR(CancellationError);
SCENERYLAB_NUMERIC_ERROR(NegativeMass);
SCENERYLAB_NUMERIC_ERROR(ToleranceError);
SCENERYLAB_NUMERIC_ERROR(ZeroDenominator);
SCENERYLAB_NUMERIC_ERROR(DomainError);
SCENERYLAB_NUMERIC_ERROR(MonotonicityError);
SCENERYLAB_NUMERIC_ERROR(BracketError);
SCENERYLAB_NUMERIC_ERROR(EmptyWindow);
SCENERYLAB_NUMERIC_ERROR(GridMismatch);
SCENERYLAB_NUMERIC_ERROR(DivergenceError);

#undef SCENERYLAB_NUMERIC_ERROR

// Malformed specs and configs. Not numeric; the tool maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scenerylab
