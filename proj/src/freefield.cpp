#include "ncfield/freefield.hpp"

#include "ncfield/errors.hpp"

namespace ncfield {

namespace {

/// Pads a representation with zero coefficients for missing variables.
FormalLinearRep embed_nvars(const FormalLinearRep& rep, int nvars) {
  if (rep.A.n >= nvars) return rep;
  FormalLinearRep r = rep;
  LinearPencil a(rep.A.N, nvars);
  for (int i = 0; i <= rep.A.n; ++i) a.coeffs[i] = rep.A.coeffs[i];
  r.A = a;
  return r;
}

FormalLinearRep rep_add_blocks(const FormalLinearRep& a, const FormalLinearRep& b) {
  const int k1 = a.dim(), k2 = b.dim();
  const int nv = a.A.n;
  FormalLinearRep r;
  r.u = ExactMatrix(1, k1 + k2);
  r.u.set_block(0, 0, a.u);
  r.u.set_block(0, k1, b.u);
  r.v = ExactMatrix(k1 + k2, 1);
  r.v.set_block(0, 0, a.v);
  r.v.set_block(k1, 0, b.v);
  r.A = LinearPencil(k1 + k2, nv);
  for (int i = 0; i <= nv; ++i) {
    r.A.coeffs[i].set_block(0, 0, a.A.coeffs[i]);
    r.A.coeffs[i].set_block(k1, k1, b.A.coeffs[i]);
  }
  return r;
}

FormalLinearRep rep_mul_blocks(const FormalLinearRep& a, const FormalLinearRep& b) {
  const int k1 = a.dim(), k2 = b.dim();
  const int nv = a.A.n;
  FormalLinearRep r;
  r.u = ExactMatrix(1, k1 + k2);
  r.u.set_block(0, k2, a.u);
  r.v = ExactMatrix(k1 + k2, 1);
  r.v.set_block(k1, 0, b.v);
  r.A = LinearPencil(k1 + k2, nv);
  ExactMatrix corner = a.v * b.u;
  for (int i = 0; i < k1; ++i)
    for (int j = 0; j < k2; ++j) r.A.coeffs[0].at(i, j) = -corner.at(i, j);
  for (int i = 0; i <= nv; ++i) {
    r.A.coeffs[i].set_block(0, k2, a.A.coeffs[i]);
    r.A.coeffs[i].set_block(k1, 0, b.A.coeffs[i]);
  }
  return r;
}

FormalLinearRep rep_inv_blocks(const FormalLinearRep& a) {
  const int k = a.dim();
  const int nv = a.A.n;
  FormalLinearRep r;
  r.u = ExactMatrix(1, k + 1);
  r.u.at(0, 0) = ExactScalar(1);
  r.v = ExactMatrix(k + 1, 1);
  r.v.at(0, 0) = ExactScalar(1);
  r.A = LinearPencil(k + 1, nv);
  for (int j = 0; j < k; ++j) {
    r.A.coeffs[0].at(0, j + 1) = a.u.at(0, j);
    r.A.coeffs[0].at(j + 1, 0) = -a.v.at(j, 0);
  }
  for (int i = 0; i <= nv; ++i) r.A.coeffs[i].set_block(1, 1, a.A.coeffs[i]);
  return r;
}

}  // namespace

RationalFunction RationalFunction::from_rep(FormalLinearRep rep, std::optional<RatExpr> source,
                                            std::uint64_t seed) {
  RationalFunction f;
  f.rep_ = std::move(rep);
  f.source_ = std::move(source);
  RankCertificate cert = is_full(f.rep_.A, seed);
  if (cert.kind != RankCertificate::Kind::Full)
    throw NotRegularError("expression is not regular: linearization pencil is not full");
  f.cert_ = cert;
  return f;
}

RationalFunction RationalFunction::from_expr(const RatExpr& e, std::uint64_t seed) {
  return from_rep(linearize(e), e, seed);
}

bool RationalFunction::is_zero(std::uint64_t seed) const {
  return bordered_is_zero(rep_.u, rep_.A, rep_.v, seed);
}

RationalFunction rf_add(const RationalFunction& a, const RationalFunction& b,
                        std::uint64_t seed) {
  int nv = std::max(a.nvars(), b.nvars());
  FormalLinearRep rep =
      rep_add_blocks(embed_nvars(a.rep(), nv), embed_nvars(b.rep(), nv));
  return RationalFunction::from_rep(std::move(rep), std::nullopt, seed);
}

RationalFunction rf_mul(const RationalFunction& a, const RationalFunction& b,
                        std::uint64_t seed) {
  int nv = std::max(a.nvars(), b.nvars());
  FormalLinearRep rep =
      rep_mul_blocks(embed_nvars(a.rep(), nv), embed_nvars(b.rep(), nv));
  return RationalFunction::from_rep(std::move(rep), std::nullopt, seed);
}

RationalFunction rf_neg(const RationalFunction& a) {
  FormalLinearRep rep = a.rep();
  rep.u = rep.u.scaled(ExactScalar(-1));
  // The pencil is unchanged, so the existing certificate stays valid.
  return RationalFunction::from_rep(std::move(rep), std::nullopt);
}

RationalFunction rf_inv(const RationalFunction& a, std::uint64_t seed) {
  if (a.is_zero(seed))
    throw DivisionByZeroFunctionError("rf_inv: cannot invert the zero function");
  FormalLinearRep rep = rep_inv_blocks(a.rep());
  return RationalFunction::from_rep(std::move(rep), std::nullopt, seed);
}

bool equals(const RationalFunction& a, const RationalFunction& b, std::uint64_t seed) {
  if (a.nvars() != b.nvars()) {
    // Same element can still live in a larger variable set; align first.
    }
  RationalFunction diff = rf_add(a, rf_neg(b), seed);
  return diff.is_zero(seed);
}

Eigen::MatrixXcd evaluate_rf(const RationalFunction& r, const MatrixTuple& x, double tol) {
  Eigen::MatrixXcd value = rep_eval(r.rep(), x, tol);
  if (r.source()) {
    try {
      Eigen::MatrixXcd dag = eval_dag(*r.source(), x);
      if ((value - dag).norm() > 1e-6 * (1.0 + dag.norm()))
        throw InconsistentError("evaluate_rf: representation and DAG evaluations disagree");
    } catch (const DomainError&) {
      // The representation's domain can exceed the expression's; the
      // well-definedness theorem covers this case.
    }
  }
  return value;
}

}  // namespace ncfield
