#pragma once

#include <stdexcept>
#include <string>

namespace unigen {

/// Raised when a dimension or length does not fit the operation.
class InvalidDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a caller breaks a documented precondition (e.g. a
/// non-Hermitian matrix handed to the Hermitian eigensolver).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when an iterative numeric routine fails to converge.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed task, config or data files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace unigen
