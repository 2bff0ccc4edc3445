#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ncfield/exact.hpp"
#include "ncfield/ncpoly.hpp"
#include "ncfield/pencil.hpp"

namespace ncfield {

/// Rational expression as a DAG of Const/Var/Add/Mul/Inv nodes. Mul children
/// carry left/right order; syntactically identical subtrees are shared.
struct RatExpr {
  struct Node {
    enum class Op { Const, Var, Add, Mul, Inv };
    Op op = Op::Const;
    ExactScalar value;       // Const
    int var = 0;             // Var, 1-based index
    int lhs = -1, rhs = -1;  // children (Inv uses lhs only)
  };

  std::vector<Node> nodes;
  int root = -1;
  int nvars = 0;

  const Node& node(int id) const { return nodes[size_t(id)]; }
};

/// Builder with hash-consing of identical subtrees.
class ExprBuilder {
 public:
  int constant(const ExactScalar& c);
  int variable(int index);
  int add(int l, int r);
  int mul(int l, int r);
  int inv(int child);
  int sub(int l, int r) { return add(l, mul(constant(ExactScalar(-1)), r)); }

  RatExpr finish(int root) const;

 private:
  int intern(RatExpr::Node n);
  RatExpr expr_;
  std::map<std::string, int> memo_;
};

/// Grammar:
///   expr   := term { ("+" | "-") term }
///   term   := factor { "*" factor }
///   factor := "inv(" expr ")" | "(" expr ")" | scalar | var
///   var    := "x" digits | "x" | "y" | "z"        (x,y,z = x1,x2,x3)
///   scalar := rational or decimal, optional trailing "i"
/// Subtraction desugars to + (-1) * rhs.
RatExpr parse_expr(const std::string& text);

std::string to_string(const RatExpr& e);

/// Bottom-up memoized evaluation. An Inv node whose child has condition
/// number above 1/tol raises DomainError carrying the node id.
Eigen::MatrixXcd eval_dag(const RatExpr& e, const MatrixTuple& x, double tol = 1e-12);

/// Row * pencil-inverse * column presentation of a rational expression,
/// valid over every unital algebra on the pencil's invertibility locus.
struct FormalLinearRep {
  ExactMatrix u;   // 1 x k
  LinearPencil A;  // k x k
  ExactMatrix v;   // k x 1

  int dim() const { return A.N; }
};

/// Structural recursion with the block rules: scalars/variables give 2x2
/// blocks, sums and products concatenate (dims add), inverses border
/// (dim + 1). The output dimension is a deterministic function of the tree.
FormalLinearRep linearize(const RatExpr& e);

/// Dimension of linearize(e) computed by the block-size arithmetic alone.
long linearize_dim(const RatExpr& e);

/// u A(X)^{-1} v; throws DomainError when A(X) is out of condition.
Eigen::MatrixXcd rep_eval(const FormalLinearRep& rep, const MatrixTuple& x, double tol = 1e-12);

/// Checks || u A(X)^{-1} v - eval_dag(e, X) || <= tol * (1 + ||eval_dag||).
bool rep_eval_consistency(const RatExpr& e, const FormalLinearRep& rep, const MatrixTuple& x,
                          double tol);

}  // namespace ncfield
