#pragma once

#include <stdexcept>
#include <string>

namespace pmod {

// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Bad user input: out-of-range cell IDs, malformed graph files, bad flags.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A halted configuration that does not encode a well-formed P/C solution.
class MalformedOutput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pmod
