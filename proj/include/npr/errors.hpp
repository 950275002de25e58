#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace npr {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different spaces (atom counts disagree).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A parameter is outside the documented range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The feasible set at the requested level is empty, or a construction does not apply.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable input.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A machine-checked postcondition did not hold. Signals a bug, never a user error.
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive search ran past its budget. Carries the best bound found so far.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t best_lower_bound)
      : Error(what), best_lower_bound_(best_lower_bound) {}
  std::size_t best_lower_bound() const noexcept { return best_lower_bound_; }

 private:
  std::size_t best_lower_bound_;
};

}  // namespace npr
