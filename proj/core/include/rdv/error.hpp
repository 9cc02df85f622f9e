#pragma once

#include <stdexcept>
#include <string>

namespace rdv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input (tree, automaton, scenario files).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid data: bad tree, non-total automaton, bad scenario.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed its configured budget; no answer is given.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// The request is well-formed but cannot be honoured, e.g. an unbounded
// horizon for an agent without a finite configuration space.
class Refused : public Error {
 public:
  using Error::Error;
};

// A construction contradicted its own verification step.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace rdv
