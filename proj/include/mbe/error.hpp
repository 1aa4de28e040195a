#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mbe {

/// Bad input to an API call (malformed factor, non-permutation ordering, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A recorded table would exceed the configured cell budget.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t requested_cells)
      : std::runtime_error(what), requested_(requested_cells) {}
  std::size_t requested_cells() const noexcept { return requested_; }

 private:
  std::size_t requested_;
};

/// Mini-bucket parameters that admit no (i,m)-partitioning.
class InfeasibleConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// BNET file errors; line/column are 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error(format(msg, line, column)), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& msg, std::size_t line, std::size_t column) {
    if (line == 0) return msg;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
  }
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mbe
