#pragma once

#include <stdexcept>
#include <string>

namespace maxstable {

// Caller violated a precondition (bad argument, inconsistent inputs).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure failed (factorization, runaway series, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace maxstable
