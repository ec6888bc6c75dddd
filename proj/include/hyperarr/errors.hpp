#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperarr {

// Operands from two different cyclotomic fields were combined.
class FieldMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed scalar or .arr input. `position` is a character offset for
// scalars and a 1-based line number for .arr files.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A configurable search or enumeration cap was hit.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A catalog entry or combinatorial construction disagreed with its expected facts.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hyperarr
