#pragma once

#include <stdexcept>
#include <string>

namespace dmfd {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A computation produced NaN or infinity, or a parameter is out of its domain.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied configuration (names, parameters, shapes).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File access or file format failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dmfd
