#pragma once

#include <stdexcept>
#include <string>

namespace essh {

/// Base class for every error raised by the simulator core.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input that violates a type invariant (NaN hopping, bad grid, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The chain has too few cells for the longest nonzero hopping.
class ChainTooShort : public Error {
 public:
  using Error::Error;
};

/// The d-vector curve touches the origin; the winding number is undefined.
class GaplessError : public Error {
 public:
  explicit GaplessError(const std::string& what, double min_gap = 0.0)
      : Error(what), min_gap_(min_gap) {}
  double min_gap() const noexcept { return min_gap_; }

 private:
  double min_gap_;
};

/// Numerical failure: eigensolver did not converge, or a derived quantity
/// could not be produced from the data.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoEdgeState : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoPlateau : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoTransport : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace essh
