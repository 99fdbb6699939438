#pragma once

#include <stdexcept>
#include <string>

namespace ampdist {

// Bad parameters or inconsistent register wiring.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input files (arrays, truth tables, weights).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested simulation would exceed the statevector width cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ampdist
