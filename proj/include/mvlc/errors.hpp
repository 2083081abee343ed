#pragma once

#include <stdexcept>
#include <string>

namespace mvlc {

// All library errors derive from Error so callers can catch one base type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidMatrix : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

// Carries 1-based line/column of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(msg + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  // Message used as-is; for rethrows whose text already carries a position.
  static ParseError verbatim(const std::string& msg, int line, int column) {
    return ParseError(msg, line, column, 0);
  }

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  ParseError(const std::string& msg, int line, int column, int)
      : Error(msg), line_(line), column_(column) {}

  int line_;
  int column_;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

// FD-produced curvature data violated a symmetry it should satisfy.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mvlc
