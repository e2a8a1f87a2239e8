#pragma once

#include <stdexcept>
#include <string>

namespace phisim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed configuration, mismatched grids, unsupported combinations.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Stability refusals, solver non-convergence, non-finite results.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A monitored invariant exceeded its configured ceiling.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace phisim
