#pragma once

#include <stdexcept>
#include <string>

namespace wqed {

// Bad input: parameters, configs, shapes. The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnsupportedTruncation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Failures of the numerics themselves. The CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class StepSizeError : public NumericError {
 public:
  using NumericError::NumericError;
};

class BudgetError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace wqed
