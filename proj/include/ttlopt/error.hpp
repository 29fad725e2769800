#pragma once

#include <stdexcept>
#include <string>

namespace ttlopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed problem instance (empty catalog, budget out of range, bad weights).
class InvalidInstance : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a point where the distribution has no remaining mass
/// (hazard at F = 1, occupancy map at x = 1).
class SaturatedError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at an integrable singularity (li(1)).
class SingularError : public Error {
 public:
  using Error::Error;
};

/// A bracketed root search found no sign change, or a solver ran out of
/// iterations.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Instance is valid but outside the convex regime the solver handles.
class NonConvexInstance : public Error {
 public:
  using Error::Error;
};

}  // namespace ttlopt
