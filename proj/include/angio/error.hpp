#pragma once

#include <stdexcept>
#include <string>

namespace angio {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed, degenerate, or inconsistent input (CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A metric whose denominator is zero for the given input (CLI exit code 3).
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

}  // namespace angio
