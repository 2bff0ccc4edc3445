#include "ncfield/ratdag.hpp"

#include <cctype>
#include <functional>
#include <sstream>

#include "ncfield/errors.hpp"

namespace ncfield {

int ExprBuilder::intern(RatExpr::Node n) {
  std::ostringstream key;
  key << int(n.op) << '|' << n.value.str() << '|' << n.var << '|' << n.lhs << '|' << n.rhs;
  auto it = memo_.find(key.str());
  if (it != memo_.end()) return it->second;
  expr_.nodes.push_back(n);
  int id = int(expr_.nodes.size()) - 1;
  memo_.emplace(key.str(), id);
  return id;
}

int ExprBuilder::constant(const ExactScalar& c) {
  RatExpr::Node n;
  n.op = RatExpr::Node::Op::Const;
  n.value = c;
  return intern(n);
}

int ExprBuilder::variable(int index) {
  if (index < 1) throw VariableMismatchError("ExprBuilder: variable index must be >= 1");
  RatExpr::Node n;
  n.op = RatExpr::Node::Op::Var;
  n.var = index;
  return intern(n);
}

int ExprBuilder::add(int l, int r) {
  RatExpr::Node n;
  n.op = RatExpr::Node::Op::Add;
  n.lhs = l;
  n.rhs = r;
  return intern(n);
}

int ExprBuilder::mul(int l, int r) {
  RatExpr::Node n;
  n.op = RatExpr::Node::Op::Mul;
  n.lhs = l;
  n.rhs = r;
  return intern(n);
}

int ExprBuilder::inv(int child) {
  RatExpr::Node n;
  n.op = RatExpr::Node::Op::Inv;
  n.lhs = child;
  return intern(n);
}

RatExpr ExprBuilder::finish(int root) const {
  RatExpr e = expr_;
  e.root = root;
  int nv = 0;
  for (const auto& n : e.nodes)
    if (n.op == RatExpr::Node::Op::Var) nv = std::max(nv, n.var);
  e.nvars = nv;
  return e;
}

namespace {

struct ExprCursor {
  const std::string& s;
  size_t pos = 0;
  ExprBuilder* b;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool starts_with(const char* kw) {
    skip_ws();
    return s.compare(pos, std::strlen(kw), kw) == 0;
  }
};

int parse_expr_rec(ExprCursor& c);

int parse_scalar_factor(ExprCursor& c) {
  c.skip_ws();
  size_t start = c.pos;
  if (c.peek() == '-' || c.peek() == '+') ++c.pos;
  bool any = false;
  while (c.pos < c.s.size()) {
    char ch = c.s[c.pos];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == '/') {
      ++c.pos;
      any = true;
    } else {
      break;
    }
  }
  if (!any) throw SyntaxError("expected scalar", start);
  bool imag = false;
  if (c.pos < c.s.size() && c.s[c.pos] == 'i') {
    imag = true;
    ++c.pos;
  }
  mpq_class q = parse_rational(c.s.substr(start, c.pos - start - (imag ? 1 : 0)));
  ExactScalar v = imag ? ExactScalar(mpq_class(0), q) : ExactScalar(q, mpq_class(0));
  return c.b->constant(v);
}

int parse_factor(ExprCursor& c) {
  c.skip_ws();
  char ch = c.peek();
  if (c.starts_with("inv(")) {
    c.pos += 4;
    int inner = parse_expr_rec(c);
    if (c.peek() != ')') throw SyntaxError("expected ')'", c.pos);
    ++c.pos;
    return c.b->inv(inner);
  }
  if (ch == '(') {
    ++c.pos;
    int inner = parse_expr_rec(c);
    if (c.peek() != ')') throw SyntaxError("expected ')'", c.pos);
    ++c.pos;
    return inner;
  }
  if (ch == 'x' || ch == 'y' || ch == 'z') {
    ++c.pos;
    if (ch == 'x') {
      size_t start = c.pos;
      while (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) ++c.pos;
      if (c.pos > start) return c.b->variable(std::stoi(c.s.substr(start, c.pos - start)));
      return c.b->variable(1);
    }
    return c.b->variable(ch == 'y' ? 2 : 3);
  }
  if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '+' ||
      ch == 'i') {
    if (ch == 'i') {
      ++c.pos;
      return c.b->constant(ExactScalar::imaginary_unit());
    }
    return parse_scalar_factor(c);
  }
  throw SyntaxError("expected factor", c.pos);
}

int parse_term(ExprCursor& c) {
  int acc = parse_factor(c);
  while (c.peek() == '*') {
    ++c.pos;
    int rhs = parse_factor(c);
    acc = c.b->mul(acc, rhs);
  }
  return acc;
}

int parse_expr_rec(ExprCursor& c) {
  int acc = parse_term(c);
  while (true) {
    char ch = c.peek();
    if (ch == '+') {
      ++c.pos;
      acc = c.b->add(acc, parse_term(c));
    } else if (ch == '-') {
      ++c.pos;
      acc = c.b->sub(acc, parse_term(c));
    } else {
      break;
    }
  }
  return acc;
}

}  // namespace

RatExpr parse_expr(const std::string& text) {
  ExprBuilder builder;
  ExprCursor c{text, 0, &builder};
  int root = parse_expr_rec(c);
  c.skip_ws();
  if (c.pos != text.size()) throw SyntaxError("trailing input", c.pos);
  return builder.finish(root);
}

namespace {

void print_node(const RatExpr& e, int id, std::ostringstream& out, bool parens_for_add) {
  const auto& n = e.node(id);
  switch (n.op) {
    case RatExpr::Node::Op::Const:
      out << n.value.str();
      break;
    case RatExpr::Node::Op::Var:
      out << "x" << n.var;
      break;
    case RatExpr::Node::Op::Add: {
      if (parens_for_add) out << "(";
      print_node(e, n.lhs, out, false);
      out << " + ";
      print_node(e, n.rhs, out, false);
      if (parens_for_add) out << ")";
      break;
    }
    case RatExpr::Node::Op::Mul:
      print_node(e, n.lhs, out, true);
      out << "*";
      print_node(e, n.rhs, out, true);
      break;
    case RatExpr::Node::Op::Inv:
      out << "inv(";
      print_node(e, n.lhs, out, false);
      out << ")";
      break;
  }
}

}  // namespace

std::string to_string(const RatExpr& e) {
  std::ostringstream out;
  print_node(e, e.root, out, false);
  return out.str();
}

namespace {

Eigen::MatrixXcd eval_node(const RatExpr& e, int id, const MatrixTuple& x, double tol,
                           std::vector<std::optional<Eigen::MatrixXcd>>& memo) {
  if (memo[size_t(id)]) return *memo[size_t(id)];
  const auto& n = e.node(id);
  const int d = x.dim;
  Eigen::MatrixXcd out;
  switch (n.op) {
    case RatExpr::Node::Op::Const:
      out = n.value.to_complex() * Eigen::MatrixXcd::Identity(d, d);
      break;
    case RatExpr::Node::Op::Var:
      if (n.var > x.n) throw DimensionMismatchError("eval_dag: tuple has too few matrices");
      out = x.mats[size_t(n.var) - 1];
      break;
    case RatExpr::Node::Op::Add:
      out = eval_node(e, n.lhs, x, tol, memo) + eval_node(e, n.rhs, x, tol, memo);
      break;
    case RatExpr::Node::Op::Mul:
      out = eval_node(e, n.lhs, x, tol, memo) * eval_node(e, n.rhs, x, tol, memo);
      break;
    case RatExpr::Node::Op::Inv: {
      Eigen::MatrixXcd child = eval_node(e, n.lhs, x, tol, memo);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(child);
      const auto& sv = svd.singularValues();
      double smin = sv(sv.size() - 1), smax = sv(0);
      if (smin <= 0 || smax / smin > 1.0 / tol)
        throw DomainError("eval_dag: inverse of ill-conditioned value", id);
      out = child.partialPivLu().solve(Eigen::MatrixXcd::Identity(d, d));
      break;
    }
  }
  memo[size_t(id)] = out;
  return out;
}

}  // namespace

Eigen::MatrixXcd eval_dag(const RatExpr& e, const MatrixTuple& x, double tol) {
  if (e.root < 0) throw Error("eval_dag: empty expression");
  if (e.nvars > x.n) throw DimensionMismatchError("eval_dag: tuple has too few matrices");
  std::vector<std::optional<Eigen::MatrixXcd>> memo(e.nodes.size());
  return eval_node(e, e.root, x, tol, memo);
}

namespace {

FormalLinearRep rep_scalar_block(const ExactScalar& c, int var, int nvars) {
  // ((0 1), ((-c, 1), (1, 0)), (0, 1)^t); for a variable the -x_j lands in
  // the matching homogeneous coefficient.
  FormalLinearRep r;
  r.u = ExactMatrix(1, 2);
  r.u.at(0, 1) = ExactScalar(1);
  r.v = ExactMatrix(2, 1);
  r.v.at(1, 0) = ExactScalar(1);
  r.A = LinearPencil(2, nvars);
  r.A.coeffs[0].at(0, 1) = ExactScalar(1);
  r.A.coeffs[0].at(1, 0) = ExactScalar(1);
  if (var == 0)
    r.A.coeffs[0].at(0, 0) = -c;
  else
    r.A.coeffs[size_t(var)].at(0, 0) = ExactScalar(-1);
  return r;
}

FormalLinearRep rep_add(const FormalLinearRep& a, const FormalLinearRep& b) {
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

FormalLinearRep rep_mul(const FormalLinearRep& a, const FormalLinearRep& b) {
  // ((0 u1), ((-v1 u2, A1), (A2, 0)), (0, v2)^t): block columns are
  // [k2 | k1] wide, block rows [k1 | k2] tall.
  const int k1 = a.dim(), k2 = b.dim();
  const int nv = a.A.n;
  FormalLinearRep r;
  r.u = ExactMatrix(1, k1 + k2);
  r.u.set_block(0, k2, a.u);
  r.v = ExactMatrix(k1 + k2, 1);
  r.v.set_block(k1, 0, b.v);
  r.A = LinearPencil(k1 + k2, nv);
  ExactMatrix corner = a.v * b.u;  // k1 x k2
  for (int i = 0; i < k1; ++i)
    for (int j = 0; j < k2; ++j) r.A.coeffs[0].at(i, j) = -corner.at(i, j);
  for (int i = 0; i <= nv; ++i) {
    r.A.coeffs[i].set_block(0, k2, a.A.coeffs[i]);
    r.A.coeffs[i].set_block(k1, 0, b.A.coeffs[i]);
  }
  return r;
}

FormalLinearRep rep_inv(const FormalLinearRep& a) {
  // ((1 0), ((0, u), (-v, A)), (1, 0)^t). The column border carries -v so
  // that the (1,1) entry of the inverse is +r^{-1} under the convention
  // r = u A^{-1} v fixed by the scalar/variable blocks.
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

FormalLinearRep linearize_node(const RatExpr& e, int id, int nvars) {
  const auto& n = e.node(id);
  switch (n.op) {
    case RatExpr::Node::Op::Const:
      return rep_scalar_block(n.value, 0, nvars);
    case RatExpr::Node::Op::Var:
      return rep_scalar_block(ExactScalar(0), n.var, nvars);
    case RatExpr::Node::Op::Add:
      return rep_add(linearize_node(e, n.lhs, nvars), linearize_node(e, n.rhs, nvars));
    case RatExpr::Node::Op::Mul:
      return rep_mul(linearize_node(e, n.lhs, nvars), linearize_node(e, n.rhs, nvars));
    case RatExpr::Node::Op::Inv:
      return rep_inv(linearize_node(e, n.lhs, nvars));
  }
  throw Error("linearize: unknown node");
}

}  // namespace

FormalLinearRep linearize(const RatExpr& e) {
  if (e.root < 0) throw Error("linearize: empty expression");
  return linearize_node(e, e.root, e.nvars);
}

long linearize_dim(const RatExpr& e) {
  std::vector<long> memo(e.nodes.size(), -1);
  std::function<long(int)> rec = [&](int id) -> long {
    if (memo[size_t(id)] >= 0) return memo[size_t(id)];
    const auto& n = e.node(id);
    long d = 0;
    switch (n.op) {
      case RatExpr::Node::Op::Const:
      case RatExpr::Node::Op::Var:
        d = 2;
        break;
      case RatExpr::Node::Op::Add:
      case RatExpr::Node::Op::Mul:
        d = rec(n.lhs) + rec(n.rhs);
        break;
      case RatExpr::Node::Op::Inv:
        d = rec(n.lhs) + 1;
        break;
    }
    memo[size_t(id)] = d;
    return d;
  };
  return rec(e.root);
}

Eigen::MatrixXcd rep_eval(const FormalLinearRep& rep, const MatrixTuple& x, double tol) {
  const int k = rep.dim();
  const int d = x.dim;
  Eigen::MatrixXcd ax = rep.A.evaluate(x);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ax);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 0 || sv(0) / sv(sv.size() - 1) > 1.0 / tol)
    throw DomainError("rep_eval: pencil evaluation not invertible", -1);

  Eigen::MatrixXcd vblk = Eigen::MatrixXcd::Zero(k * d, d);
  for (int j = 0; j < k; ++j)
    vblk.block(j * d, 0, d, d) =
        rep.v.at(j, 0).to_complex() * Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd y = ax.partialPivLu().solve(vblk);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < k; ++j) out += rep.u.at(0, j).to_complex() * y.block(j * d, 0, d, d);
  return out;
}

bool rep_eval_consistency(const RatExpr& e, const FormalLinearRep& rep, const MatrixTuple& x,
                          double tol) {
  Eigen::MatrixXcd dag = eval_dag(e, x);
  Eigen::MatrixXcd lin = rep_eval(rep, x);
  return (lin - dag).norm() <= tol * (1.0 + dag.norm());
}

}  // namespace ncfield
