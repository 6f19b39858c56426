#pragma once

#include <stdexcept>
#include <string>

namespace vwm {

// Base of every domain error raised by the toolkit. The CLI maps these to
// exit code 1; anything else escaping a subcommand is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public FormatError {
 public:
  using FormatError::FormatError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class CapabilityError : public Error {
 public:
  using Error::Error;
};

// An attack could not construct a starting point with the required label.
class InitializationError : public Error {
 public:
  using Error::Error;
};

}  // namespace vwm
