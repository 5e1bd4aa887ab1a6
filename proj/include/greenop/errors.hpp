#ifndef GREENOP_ERRORS_HPP
#define GREENOP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace greenop {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Syntax error in an expression, operator or scalar literal.
struct ParseError : Error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

/// Incompatible matrix/variable dimensions.
struct DimensionError : Error {
  using Error::Error;
};

/// A value left the exactly representable class, e.g. e^c for a nonzero
/// rational constant c produced by an affine substitution.
struct UnrepresentableError : Error {
  using Error::Error;
};

struct SingularMatrixError : Error {
  using Error::Error;
};

/// Rewrite step budget exhausted before a normal form was reached.
struct BudgetError : Error {
  using Error::Error;
};

/// A boundary problem failed its regularity check.
struct NotRegularError : Error {
  using Error::Error;
};

/// Solver precondition violated (arity, zero lead coefficient, bad
/// factorization, incompatible dimensions).
struct InvalidProblemError : Error {
  using Error::Error;
};

/// Malformed problem file: bad JSON, schema violation, unparseable payload.
struct FileFormatError : Error {
  using Error::Error;
};

}  // namespace greenop

#endif
