#pragma once

#include <stdexcept>
#include <string>

namespace subweibull {

// Invalid parameters or configuration. Maps to CLI exit code 2.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure: divergence, missing bracket, infeasible constraint.
// Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoClosedFormError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class InfeasibleError : public NumericError {
 public:
  using NumericError::NumericError;
};

class UnboundedSupError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A checked inequality failed. Indicates an implementation bug, not bad input.
class VerificationError : public NumericError {
 public:
  VerificationError(const std::string& what, double at)
      : NumericError(what + " (violated at " + std::to_string(at) + ")"), point_(at) {}
  double point() const { return point_; }

 private:
  double point_;
};

}  // namespace subweibull
