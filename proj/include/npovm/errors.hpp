#pragma once

#include <stdexcept>
#include <string>

namespace npovm {

/// Raised for malformed inputs: wrong dimensions, out-of-range parameters,
/// non-Hermitian operators, invalid states.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot produce a trustworthy answer
/// (eigensolver non-convergence, Born probabilities out of range).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace npovm
