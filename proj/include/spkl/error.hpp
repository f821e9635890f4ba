#pragma once

#include <stdexcept>
#include <string>

namespace spkl {

/// Base class for all library errors. The CLI maps each subclass onto an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or command-line usage (exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unreadable, malformed or missing input data (exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A violated internal invariant, e.g. a non-finite training loss (exit code 3).
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace spkl
