#pragma once

#include <stdexcept>
#include <string>

namespace iflt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied data that violates an operation's precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to be positive semidefinite has a clearly negative eigenvalue.
class NotPSD : public Error {
 public:
  using Error::Error;
};

/// A recursion or decomposition produced non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents (model JSON, ensemble CSV/binary, manifests).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent experiment configuration; the message starts with the field path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace iflt
