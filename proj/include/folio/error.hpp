#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace folio {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::size_t line, std::size_t column)
      : Error(message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        offset_(offset),
        line_(line),
        column_(column) {}

  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
};

// Unknown relation symbol, arity or sort mismatch, inconsistent structure.
class SignatureError : public Error {
 public:
  using Error::Error;
};

// Unassigned free variable or out-of-universe value during evaluation.
class EvalError : public Error {
 public:
  using Error::Error;
};

// An operation was called on input outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A configured size limit was exceeded.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace folio
