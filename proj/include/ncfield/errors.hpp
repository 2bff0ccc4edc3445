#pragma once

#include <stdexcept>
#include <string>

namespace ncfield {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VariableMismatchError : Error {
  using Error::Error;
};
struct DimensionMismatchError : Error {
  using Error::Error;
};
struct NotLinearError : Error {
  using Error::Error;
};
struct NotSquareError : Error {
  using Error::Error;
};
struct NotSelfadjointError : Error {
  using Error::Error;
};
struct NotSemiFlatError : Error {
  using Error::Error;
};
struct NotReducibleError : Error {
  using Error::Error;
};
struct CertificateInvalidError : Error {
  using Error::Error;
};
/// Randomized rank testers disagreed; rerun with higher blow-up dimension.
struct InconsistentError : Error {
  using Error::Error;
};

struct SyntaxError : Error {
  SyntaxError(const std::string& what, size_t position)
      : Error(what + " at position " + std::to_string(position)), pos(position) {}
  size_t pos;
};

/// Evaluation point lies outside the domain of the expression.
struct DomainError : Error {
  DomainError(const std::string& what, int node_id) : Error(what), node(node_id) {}
  int node;
};

struct NotRegularError : Error {
  using Error::Error;
};
struct DivisionByZeroFunctionError : Error {
  using Error::Error;
};

}  // namespace ncfield
