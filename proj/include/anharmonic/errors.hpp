#pragma once

#include <stdexcept>
#include <string>

namespace anharmonic {

/// Base of every error raised by the library. `exit_code()` maps onto the
/// CLI contract: 2 for invalid input, 3 for numerical non-convergence.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 3; }
};

class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class DegenerateInput : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidAngular : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Evaluation requested at (or within 1e-12 of) a zero of x^p P(x^2).
class NodeEvaluation : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  using Error::Error;
};

class SingularConstraint : public Error {
 public:
  using Error::Error;
};

class OptimizerStalled : public Error {
 public:
  using Error::Error;
};

class NodeRegularityViolated : public Error {
 public:
  using Error::Error;
};

class RootFindingFailed : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

}  // namespace anharmonic
