#pragma once

#include <stdexcept>
#include <string>

namespace imprint {

// Base of every error the toolkit throws. Subclasses exist so callers (and the
// CLI exit-code mapping) can distinguish input problems from numeric failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AxisNotFoundError : public Error {
 public:
  using Error::Error;
};

class InvalidSubsetsError : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class InvalidTableError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ComplexRootError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  explicit ParseError(const std::string& what) : ParseError(what, 0) {}

  // 1-based; 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class EmptyFeatureError : public Error {
 public:
  using Error::Error;
};

}  // namespace imprint
