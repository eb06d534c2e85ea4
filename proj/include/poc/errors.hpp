#pragma once

#include <stdexcept>
#include <string>

namespace poc {

// Base for every error raised by the library. The CLI maps subclasses onto
// exit codes: DataError -> 2, ReaderError / IoError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (lengths, ranges, schema).
class DataError : public Error {
 public:
  using Error::Error;
};

// Scores or ratios do not line up with the chunk or chunk list they describe.
class AlignmentError : public DataError {
 public:
  using DataError::DataError;
};

// Curve query outside the fitted knot span.
class ExtrapolationError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ReaderError : public Error {
 public:
  enum class Kind { timeout, http_status, malformed_body, connection, other };

  ReaderError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace poc
