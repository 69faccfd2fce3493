#pragma once

#include <stdexcept>
#include <string>

namespace sira {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Quadrature or root finding failed, or a closed form produced a value
// that violates its own invariants beyond round-off.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid AuctionConfig or experiment parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent internal state handed to an operation (e.g. won without accepted).
class LogicError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sira
