#pragma once

#include <stdexcept>
#include <string>

namespace hk {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric parameter is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// ψ is not strictly increasing (or ψ′ is not positive) on the grid it is paired with.
class KernelDomainError : public Error {
 public:
  using Error::Error;
};

/// Array sizes do not match, or a grid is too small for the requested operator.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A field was built on a different grid than the operator it is applied with.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// A standing hypothesis on user data (positivity of M, floors of a, b, ...) is violated.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

class LineSearchError : public Error {
 public:
  LineSearchError(const std::string& what, double last_step)
      : Error(what), last_step_(last_step) {}
  double last_step() const noexcept { return last_step_; }

 private:
  double last_step_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Raised when the monotone iteration leaves the ordered bracket.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hk
