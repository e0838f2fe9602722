#pragma once

#include <stdexcept>
#include <string>

namespace parastab {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Theta is (numerically) singular, so H is not the direct sum U_M + E_M^perp.
struct DirectSumViolation : std::runtime_error {
  DirectSumViolation(const std::string& what, double cond)
      : std::runtime_error(what), condition_number(cond) {}
  double condition_number;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::string k)
      : std::runtime_error(what), key(std::move(k)) {}
  std::string key;
};

}  // namespace parastab
