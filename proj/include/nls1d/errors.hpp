#pragma once

#include <stdexcept>
#include <string>

namespace nls1d {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input; the message names the offending field.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function (e.g. s <= 0 for V or K).
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// V(s) = omega has no positive solution.
class NoCrossingError : public InputError {
 public:
  using InputError::InputError;
};

/// A finite-difference step leaves the admissible frequency interval.
class StepError : public InputError {
 public:
  using InputError::InputError;
};

/// No standing-wave branch exists, or the branch is inconsistent.
class BranchError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Two routes that must agree did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace nls1d
