#pragma once

#include <stdexcept>
#include <string>

namespace beurling {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series or iteration ran out of budget before meeting its tolerance.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a pole (or another isolated singular point).
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A monotonicity / positivity certificate could not be established.
class CertificationError : public Error {
 public:
  CertificationError(const std::string& what, double violating_x)
      : Error(what), violating_x_(violating_x) {}
  double violating_x() const noexcept { return violating_x_; }

 private:
  double violating_x_;
};

/// A size or memory cap was exceeded.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, double estimate)
      : Error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// The operation does not apply to this kind of object (e.g. the derivative
/// of an atomic template).
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

}  // namespace beurling
