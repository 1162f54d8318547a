#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed dimensions or shapes handed to an operation.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold for its input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotADistanceError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NoDominantLabelError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A configured size cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A value parsed correctly but violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mmc
