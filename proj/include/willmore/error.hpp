#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace willmore {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument value (range, sign, domain) was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input vectors (or a Jacobian) are numerically rank deficient.
class RankError : public Error {
 public:
  RankError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}

  /// Index of the first offending vector / parameter direction.
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Raised when a quantity of the form rho^(n-2) with odd n is requested
/// at an (almost) umbilic point.
class UmbilicPointError : public Error {
 public:
  using Error::Error;
};

class UnknownIdError : public Error {
 public:
  using Error::Error;
};

}  // namespace willmore
