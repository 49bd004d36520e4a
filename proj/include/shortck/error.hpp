#pragma once

#include <stdexcept>
#include <string>

namespace shortck {

// Base for every error raised by the library. The CLI maps UsageError to
// exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters or a violated precondition.
class UsageError : public Error {
 public:
  using Error::Error;
};

// An extended exponent left the +-2^62 budget.
class ExponentBudgetError : public Error {
 public:
  ExponentBudgetError() : Error("exponent budget exceeded") {}
};

// A verifier scanned its whole range without finding an admissible index.
class NoAdmissibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace shortck
