#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace allostery {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (rank mismatch, identity
/// where a nontrivial element is required, inadmissible prime, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its configured budget. `requested` is the
/// offending size rendered in decimal (it may not fit a machine word).
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::string requested, std::size_t budget)
      : Error(what + ": size " + requested + " exceeds budget " + std::to_string(budget)),
        requested_(std::move(requested)),
        budget_(budget) {}

  const std::string& requested() const noexcept { return requested_; }
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::string requested_;
  std::size_t budget_;
};

/// Malformed textual input. Line and column are 1-based; line is 0 when the
/// input is a single-line token (a command-line argument).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    if (line == 0) return "column " + std::to_string(column) + ": " + message;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace allostery
