#include "ncfield/exact.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace ncfield {

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) {
  if (o.is_zero()) throw std::domain_error("ExactScalar: division by zero");
  mpq_class n2 = o.norm2();
  mpq_class r((re * o.re + im * o.im) / n2);
  mpq_class i((im * o.re - re * o.im) / n2);
  re = r;
  im = i;
  return *this;
}

namespace {

std::string rational_str(const mpq_class& q) { return q.get_str(); }

}  // namespace

std::string ExactScalar::str() const {
  if (im == 0) return rational_str(re);
  if (re == 0) return rational_str(im) + "i";
  std::string s = "(" + rational_str(re);
  if (im > 0) s += "+";
  s += rational_str(im) + "i)";
  return s;
}

mpq_class parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty rational literal");
  if (t[0] == '+') t = t.substr(1);  // mpq_class::set_str rejects a leading '+'
  auto dot = t.find('.');
  if (dot == std::string::npos) {
    mpq_class q;
    if (q.set_str(t, 10) != 0) throw std::invalid_argument("bad rational literal: " + text);
    q.canonicalize();
    return q;
  }
  // Decimal: digits '.' digits, exact base-10 rational.
  std::string head = t.substr(0, dot);
  std::string frac = t.substr(dot + 1);
  bool neg = false;
  if (!head.empty() && (head[0] == '+' || head[0] == '-')) {
    neg = head[0] == '-';
    head = head.substr(1);
  }
  if (frac.empty() && head.empty()) throw std::invalid_argument("bad decimal literal: " + text);
  for (char c : head + frac)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("bad decimal literal: " + text);
  mpz_class num(head.empty() ? std::string("0") : head);
  mpz_class den(1);
  for (char c : frac) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  mpq_class q(num, den);
  q.canonicalize();
  if (neg) q = -q;
  return q;
}

ExactScalar parse_scalar(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty scalar literal");
  if (t.front() == '(' && t.back() == ')') {
    // "(a+bi)" or "(a-bi)"; split at the sign separating the two parts.
    std::string inner = t.substr(1, t.size() - 2);
    if (inner.empty() || inner.back() != 'i')
      throw std::invalid_argument("bad complex literal: " + text);
    for (size_t k = 1; k < inner.size(); ++k) {
      if ((inner[k] == '+' || inner[k] == '-') && inner[k - 1] != '/' && inner[k - 1] != '+' &&
          inner[k - 1] != '-') {
        std::string a = inner.substr(0, k);
        std::string b = inner.substr(k, inner.size() - 1 - k);
        if (b == "+" || b == "-") b += "1";
        return ExactScalar(parse_rational(a), parse_rational(b));
      }
    }
    throw std::invalid_argument("bad complex literal: " + text);
  }
  if (t.back() == 'i') {
    std::string b = t.substr(0, t.size() - 1);
    if (b.empty() || b == "+" || b == "-") b += "1";
    return ExactScalar(mpq_class(0), parse_rational(b));
  }
  return ExactScalar(parse_rational(t), mpq_class(0));
}

ExactMatrix ExactMatrix::identity(int n) {
  ExactMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = ExactScalar(1);
  return m;
}

bool ExactMatrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

bool ExactMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (at(i, j) != (i == j ? ExactScalar(1) : ExactScalar(0))) return false;
  return true;
}

ExactMatrix ExactMatrix::conj_transpose() const {
  ExactMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j).conj();
  return m;
}

ExactMatrix ExactMatrix::block(int i0, int j0, int r, int c) const {
  ExactMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = at(i0 + i, j0 + j);
  return m;
}

void ExactMatrix::set_block(int i0, int j0, const ExactMatrix& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) at(i0 + i, j0 + j) = m.at(i, j);
}

ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix m(a.rows_, a.cols_);
  for (size_t k = 0; k < m.a_.size(); ++k) m.a_[k] = a.a_[k] + b.a_[k];
  return m;
}

ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix m(a.rows_, a.cols_);
  for (size_t k = 0; k < m.a_.size(); ++k) m.a_[k] = a.a_[k] - b.a_[k];
  return m;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("ExactMatrix: dimension mismatch");
  ExactMatrix m(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const ExactScalar& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) {
        if (b.at(k, j).is_zero()) continue;
        m.at(i, j) += aik * b.at(k, j);
      }
    }
  return m;
}

ExactMatrix ExactMatrix::scaled(const ExactScalar& s) const {
  ExactMatrix m(rows_, cols_);
  for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] * s;
  return m;
}

std::vector<int> ExactMatrix::row_reduce(ExactMatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols_ && row < m.rows_; ++col) {
    int p = -1;
    for (int i = row; i < m.rows_; ++i)
      if (!m.at(i, col).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < m.cols_; ++j) std::swap(m.at(p, j), m.at(row, j));
    ExactScalar inv = ExactScalar(1) / m.at(row, col);
    for (int j = col; j < m.cols_; ++j) m.at(row, j) *= inv;
    for (int i = 0; i < m.rows_; ++i) {
      if (i == row || m.at(i, col).is_zero()) continue;
      ExactScalar f = m.at(i, col);
      for (int j = col; j < m.cols_; ++j) m.at(i, j) -= f * m.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int ExactMatrix::rank() const {
  ExactMatrix m = *this;
  return int(row_reduce(m).size());
}

std::optional<ExactMatrix> ExactMatrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  ExactMatrix aug(rows_, 2 * cols_);
  aug.set_block(0, 0, *this);
  aug.set_block(0, cols_, identity(rows_));
  auto pivots = row_reduce(aug);
  if (int(pivots.size()) != rows_ || pivots.back() >= cols_) {
    // A pivot escaped into the augmented half, or rank deficit: singular.
    for (int k = 0; k < int(pivots.size()); ++k)
      if (pivots[k] >= cols_) return std::nullopt;
    if (int(pivots.size()) != rows_) return std::nullopt;
  }
  return aug.block(0, cols_, rows_, cols_);
}

ExactMatrix ExactMatrix::null_space() const {
  ExactMatrix m = *this;
  auto pivots = row_reduce(m);
  std::vector<int> free_cols;
  {
    size_t pi = 0;
    for (int c = 0; c < cols_; ++c) {
      if (pi < pivots.size() && pivots[pi] == c)
        ++pi;
      else
        free_cols.push_back(c);
    }
  }
  ExactMatrix basis(cols_, int(free_cols.size()));
  for (int k = 0; k < int(free_cols.size()); ++k) {
    int fc = free_cols[k];
    basis.at(fc, k) = ExactScalar(1);
    for (int r = 0; r < int(pivots.size()); ++r) basis.at(pivots[r], k) = -m.at(r, fc);
  }
  return basis;
}

std::optional<ExactMatrix> ExactMatrix::null_vector() const {
  ExactMatrix basis = null_space();
  if (basis.cols() == 0) return std::nullopt;
  return basis.block(0, 0, cols_, 1);
}

std::optional<ExactMatrix> ExactMatrix::solve(const ExactMatrix& rhs) const {
  if (rhs.rows() != rows_) throw std::invalid_argument("ExactMatrix::solve: dimension mismatch");
  ExactMatrix aug(rows_, cols_ + rhs.cols());
  aug.set_block(0, 0, *this);
  aug.set_block(0, cols_, rhs);
  auto pivots = row_reduce(aug);
  for (int p : pivots)
    if (p >= cols_) return std::nullopt;  // inconsistent row 0 = 1
  ExactMatrix x(cols_, rhs.cols());
  for (int r = 0; r < int(pivots.size()); ++r)
    for (int j = 0; j < rhs.cols(); ++j) x.at(pivots[r], j) = aug.at(r, cols_ + j);
  return x;
}

}  // namespace ncfield
