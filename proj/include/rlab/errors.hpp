#pragma once

#include <stdexcept>
#include <string>

namespace rlab {

// Base for every error raised by the library. The CLI maps UsageError and
// ConfigError to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation point coincides with a point mass.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// Kernel exponent too strong for the singular integral to converge.
class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Request too large for an exact path (e.g. O(N^4) brute force).
class ResourceError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

}  // namespace rlab
