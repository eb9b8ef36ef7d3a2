#pragma once

#include <stdexcept>
#include <string>

namespace dnp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or non-finite input (wrong dimensions, NaN, empty region).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the domain of definition (e.g. r <= 0 for radial forms).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A barrier or problem parameter violates one of its defining inequalities.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Requested time step exceeds the monotonicity bound of the explicit scheme.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

/// The field became non-finite during an update.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An iterative solve did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A sampled check could not decide (e.g. the operator vanished on all samples).
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

/// Rate fitting failed (too few points, non-positive data in log space).
class FitError : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue bisection never saw an inadmissible trial.
class BracketNotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace dnp
