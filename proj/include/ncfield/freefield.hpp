#pragma once

#include <Eigen/Dense>
#include <optional>

#include "ncfield/ncrank.hpp"
#include "ncfield/ratdag.hpp"

namespace ncfield {

/// Element of the free field, held as a linear representation (u, A, v)
/// whose pencil A is certified full. Representations are non-canonical;
/// equality is decided semantically by the bordered rank test.
class RationalFunction {
 public:
  /// Linearize and certify fullness; a non-full pencil means the expression
  /// defines no element of the free field (NotRegularError).
  static RationalFunction from_expr(const RatExpr& e, std::uint64_t seed = 0);

  /// Wraps an existing representation, certifying fullness.
  static RationalFunction from_rep(FormalLinearRep rep, std::optional<RatExpr> source,
                                   std::uint64_t seed = 0);

  const FormalLinearRep& rep() const { return rep_; }
  const RankCertificate& certificate() const { return cert_; }
  const std::optional<RatExpr>& source() const { return source_; }
  int dim() const { return rep_.dim(); }
  int nvars() const { return rep_.A.n; }

  /// True iff this is the zero element (bordered inner rank equals dim).
  bool is_zero(std::uint64_t seed = 0) const;

 private:
  RationalFunction() = default;
  FormalLinearRep rep_;
  RankCertificate cert_;
  std::optional<RatExpr> source_;
};

/// Block-rule arithmetic; the resulting pencil is recertified full.
RationalFunction rf_add(const RationalFunction& a, const RationalFunction& b,
                        std::uint64_t seed = 0);
RationalFunction rf_mul(const RationalFunction& a, const RationalFunction& b,
                        std::uint64_t seed = 0);
/// Negation scales u by -1; the pencil is untouched.
RationalFunction rf_neg(const RationalFunction& a);
/// Bordered inverse, dim + 1. Throws DivisionByZeroFunctionError on the
/// zero function.
RationalFunction rf_inv(const RationalFunction& a, std::uint64_t seed = 0);

/// is_zero(a + (-1) b).
bool equals(const RationalFunction& a, const RationalFunction& b, std::uint64_t seed = 0);

/// u A(X)^{-1} v when A(X) is well-conditioned (DomainError otherwise);
/// cross-checked against the source DAG when present and evaluable.
Eigen::MatrixXcd evaluate_rf(const RationalFunction& r, const MatrixTuple& x,
                             double tol = 1e-12);

}  // namespace ncfield
