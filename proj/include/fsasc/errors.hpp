#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fsasc {

/// Violated precondition: wrong dimensions, empty inputs, out-of-range parameters.
class ContractError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An integer quantity (e.g. a monomial count) does not fit the exact integer type.
class CapacityError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

/// A linear-algebra routine failed or produced an unusable result.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

using WarningHandler = std::function<void(std::string_view)>;

/// Installs a sink for non-fatal diagnostics and returns the previous one.
/// The default sink writes to stderr. Passing an empty handler silences warnings.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

inline void require(bool condition, const char* message) {
  if (!condition) throw ContractError(message);
}

}  // namespace fsasc
