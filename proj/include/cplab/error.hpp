#pragma once

#include <stdexcept>
#include <string>

namespace cplab {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A parameter outside the documented domain (n, r, c, m, sigma, budgets, ...).
class InvalidParameters : public Error {
public:
  explicit InvalidParameters(const std::string& what) : Error("invalid parameters: " + what) {}
};

// Malformed value: out-of-range proposition, unknown operator id, mismatched sizes.
class StructuralError : public Error {
public:
  explicit StructuralError(const std::string& what) : Error("structural error: " + what) {}
};

// A caller broke an operation's precondition (e.g. applying an inapplicable operator).
class ContractViolation : public Error {
public:
  explicit ContractViolation(const std::string& what) : Error("contract violation: " + what) {}
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

} // namespace cplab
