#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mplab {

/// Precondition or invariant of a public operation was not met by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Conditioning on an event of probability zero.
class ZeroMassError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The cell-probe harness caught an illegal memory access.
class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A protocol message exceeded its declared bit budget.
class ProtocolCostError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction was refused because its input does not have the required shape
/// (not semi-adaptive, adaptive static query, enumeration too large, ...).
class RefusedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mplab
