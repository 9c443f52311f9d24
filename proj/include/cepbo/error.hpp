#pragma once

#include <stdexcept>
#include <string>

namespace cepbo {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix shapes that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Configuration text that cannot be parsed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A parsed value that violates a documented constraint.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or format problems while reading/writing results.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Kernel matrix stayed indefinite through the whole jitter escalation.
class SurrogateFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace cepbo
