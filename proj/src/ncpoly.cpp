#include "ncfield/ncpoly.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace ncfield {

bool Word::ends_with(const Word& suffix) const {
  if (suffix.letters.size() > letters.size()) return false;
  return std::equal(suffix.letters.begin(), suffix.letters.end(),
                    letters.end() - suffix.letters.size());
}

MatrixTuple::MatrixTuple(std::vector<Eigen::MatrixXcd> m, bool sa)
    : n(int(m.size())), mats(std::move(m)), selfadjoint(sa) {
  dim = mats.empty() ? 0 : int(mats[0].rows());
  for (const auto& x : mats) {
    if (x.rows() != x.cols() || int(x.rows()) != dim)
      throw DimensionMismatchError("MatrixTuple: matrices must be square of a common dimension");
    if (selfadjoint) {
      double scale = std::max(1.0, x.norm());
      if ((x - x.adjoint()).norm() > 1e-12 * scale)
        throw NotSelfadjointError("MatrixTuple: selfadjoint flag set on non-Hermitian matrix");
    }
  }
}

NcPoly::NcPoly(int nvars, const ExactScalar& c) : nvars_(nvars) {
  if (!c.is_zero()) terms_[Word()] = c;
}

NcPoly NcPoly::variable(int index, int nvars) {
  if (index < 1 || index > nvars) throw VariableMismatchError("variable index out of range");
  NcPoly p(nvars);
  p.terms_[Word({index})] = ExactScalar(1);
  return p;
}

NcPoly NcPoly::monomial(const Word& w, const ExactScalar& c, int nvars) {
  for (int l : w.letters)
    if (l < 1 || l > nvars) throw VariableMismatchError("word letter out of range");
  NcPoly p(nvars);
  if (!c.is_zero()) p.terms_[w] = c;
  return p;
}

int NcPoly::degree() const {
  if (terms_.empty()) return kDegreeOfZero;
  return terms_.rbegin()->first.degree();  // deg-lex order: last key has max degree
}

ExactScalar NcPoly::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? ExactScalar(0) : it->second;
}

void NcPoly::set_coeff(const Word& w, const ExactScalar& c) {
  if (c.is_zero())
    terms_.erase(w);
  else
    terms_[w] = c;
}

NcPoly NcPoly::leading_form() const {
  NcPoly lf(nvars_);
  if (terms_.empty()) return lf;
  int d = degree();
  for (auto it = terms_.rbegin(); it != terms_.rend() && it->first.degree() == d; ++it)
    lf.terms_[it->first] = it->second;
  return lf;
}

void NcPoly::check_same_vars(const NcPoly& o) const {
  if (nvars_ != o.nvars_) throw VariableMismatchError("NcPoly: variable-count mismatch");
}

NcPoly NcPoly::operator-() const { return scaled(ExactScalar(-1)); }

NcPoly operator+(const NcPoly& a, const NcPoly& b) {
  a.check_same_vars(b);
  NcPoly r = a;
  for (const auto& [w, c] : b.terms_) {
    ExactScalar s = r.coeff(w) + c;
    r.set_coeff(w, s);
  }
  return r;
}

NcPoly operator-(const NcPoly& a, const NcPoly& b) { return a + (-b); }

NcPoly operator*(const NcPoly& a, const NcPoly& b) {
  a.check_same_vars(b);
  NcPoly r(a.nvars_);
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) {
      Word w = wa * wb;
      ExactScalar s = r.coeff(w) + ca * cb;
      r.set_coeff(w, s);
    }
  return r;
}

NcPoly NcPoly::scaled(const ExactScalar& s) const {
  NcPoly r(nvars_);
  if (s.is_zero()) return r;
  for (const auto& [w, c] : terms_) r.terms_[w] = c * s;
  return r;
}

NcPoly NcPoly::adjoint() const {
  NcPoly r(nvars_);
  for (const auto& [w, c] : terms_) r.terms_[w.reversed()] = c.conj();
  return r;
}

Eigen::MatrixXcd NcPoly::eval(const MatrixTuple& x) const {
  if (nvars_ > x.n) throw DimensionMismatchError("NcPoly::eval: tuple has too few matrices");
  int d = x.dim;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [w, c] : terms_) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d);
    for (int l : w.letters) m = m * x.mats[size_t(l) - 1];
    acc += c.to_complex() * m;
  }
  return acc;
}

std::string NcPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    ExactScalar coeff = c;
    if (first) {
      if (coeff.is_real() && coeff.re < 0) {
        out << "-";
        coeff = -coeff;
      }
    } else {
      if (coeff.is_real() && coeff.re < 0) {
        out << " - ";
        coeff = -coeff;
      } else {
        out << " + ";
      }
    }
    first = false;
    bool unit_word = w.is_unit();
    if (!coeff.is_one() || unit_word) {
      out << coeff.str();
      if (!unit_word) out << "*";
    }
    // Compress repeated letters as powers.
    for (size_t k = 0; k < w.letters.size();) {
      size_t run = 1;
      while (k + run < w.letters.size() && w.letters[k + run] == w.letters[k]) ++run;
      out << "x" << w.letters[k];
      if (run > 1) out << "^" << run;
      if (k + run < w.letters.size()) out << "*";
      k += run;
    }
  }
  return out.str();
}

namespace {

struct PolyCursor {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
};

// scalar := '(' ... ')' | [0-9./]+ ['i'] | 'i'
ExactScalar parse_scalar_token(PolyCursor& c) {
  c.skip_ws();
  size_t start = c.pos;
  if (c.peek() == '(') {
    int depth = 0;
    while (c.pos < c.s.size()) {
      if (c.s[c.pos] == '(') ++depth;
      if (c.s[c.pos] == ')') {
        --depth;
        if (depth == 0) {
          ++c.pos;
          return parse_scalar(c.s.substr(start, c.pos - start));
        }
      }
      ++c.pos;
    }
    throw SyntaxError("unbalanced parenthesis", start);
  }
  while (c.pos < c.s.size()) {
    char ch = c.s[c.pos];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == '/' || ch == 'i')
      ++c.pos;
    else
      break;
  }
  if (c.pos == start) throw SyntaxError("expected scalar", start);
  return parse_scalar(c.s.substr(start, c.pos - start));
}

int parse_var_index(PolyCursor& c) {
  c.skip_ws();
  if (c.peek() != 'x') throw SyntaxError("expected variable", c.pos);
  ++c.pos;
  size_t start = c.pos;
  while (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) ++c.pos;
  if (c.pos == start) throw SyntaxError("expected variable index", start);
  return std::stoi(c.s.substr(start, c.pos - start));
}

struct RawTerm {
  ExactScalar coeff;
  Word word;
};

RawTerm parse_term(PolyCursor& c, int& max_var) {
  RawTerm t{ExactScalar(1), Word()};
  bool expect_factor = true;
  while (true) {
    c.skip_ws();
    if (expect_factor) {
      char ch = c.peek();
      if (ch == 'x') {
        int idx = parse_var_index(c);
        max_var = std::max(max_var, idx);
        int power = 1;
        if (c.peek() == '^') {
          ++c.pos;
          c.skip_ws();
          size_t start = c.pos;
          while (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos])))
            ++c.pos;
          if (c.pos == start) throw SyntaxError("expected positive integer exponent", start);
          power = std::stoi(c.s.substr(start, c.pos - start));
          if (power < 1) throw SyntaxError("exponent must be positive", start);
        }
        for (int k = 0; k < power; ++k) t.word.letters.push_back(idx);
      } else if (ch == '(' || ch == '.' || ch == 'i' ||
                 std::isdigit(static_cast<unsigned char>(ch))) {
        t.coeff *= parse_scalar_token(c);
      } else {
        throw SyntaxError("expected factor", c.pos);
      }
      expect_factor = false;
    } else {
      if (c.peek() == '*') {
        ++c.pos;
        expect_factor = true;
      } else {
        break;
      }
    }
  }
  return t;
}

}  // namespace

NcPoly parse_poly(const std::string& text, int nvars_hint) {
  PolyCursor c{text};
  int max_var = 0;
  std::vector<RawTerm> terms;
  bool negate = false;
  if (c.peek() == '-') {
    negate = true;
    ++c.pos;
  } else if (c.peek() == '+') {
    ++c.pos;
  }
  while (true) {
    RawTerm t = parse_term(c, max_var);
    if (negate) t.coeff = -t.coeff;
    terms.push_back(std::move(t));
    if (c.eof()) break;
    char ch = c.peek();
    if (ch == '+')
      negate = false;
    else if (ch == '-')
      negate = true;
    else
      throw SyntaxError("expected '+' or '-'", c.pos);
    ++c.pos;
  }
  int nvars = std::max(nvars_hint, max_var);
  NcPoly p(nvars);
  for (const auto& t : terms) {
    ExactScalar s = p.coeff(t.word) + t.coeff;
    p.set_coeff(t.word, s);
  }
  return p;
}

PolyMatrix::PolyMatrix(int rows, int cols, int nvars)
    : rows_(rows), cols_(cols), nvars_(nvars), entries_(size_t(rows) * cols, NcPoly(nvars)) {}

PolyMatrix PolyMatrix::identity(int n, int nvars) {
  PolyMatrix m(n, n, nvars);
  for (int i = 0; i < n; ++i) m.at(i, i) = NcPoly(nvars, ExactScalar(1));
  return m;
}

PolyMatrix PolyMatrix::from_scalar(const ExactMatrix& s, int nvars) {
  PolyMatrix m(s.rows(), s.cols(), nvars);
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j) m.at(i, j) = NcPoly::constant(s.at(i, j), nvars);
  return m;
}

int PolyMatrix::degree() const {
  int d = NcPoly::kDegreeOfZero;
  for (const auto& e : entries_) d = std::max(d, e.degree());
  return d;
}

bool PolyMatrix::is_zero() const {
  for (const auto& e : entries_)
    if (!e.is_zero()) return false;
  return true;
}

PolyMatrix PolyMatrix::block(int i0, int j0, int r, int c) const {
  PolyMatrix m(r, c, nvars_);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = at(i0 + i, j0 + j);
  return m;
}

PolyMatrix PolyMatrix::submatrix(const std::vector<int>& rows,
                                 const std::vector<int>& cols) const {
  PolyMatrix m(int(rows.size()), int(cols.size()), nvars_);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) m.at(int(i), int(j)) = at(rows[i], cols[j]);
  return m;
}

PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw DimensionMismatchError("PolyMatrix: shape mismatch");
  PolyMatrix m(a.rows_, a.cols_, a.nvars_);
  for (size_t k = 0; k < m.entries_.size(); ++k) m.entries_[k] = a.entries_[k] + b.entries_[k];
  return m;
}

PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw DimensionMismatchError("PolyMatrix: shape mismatch");
  PolyMatrix m(a.rows_, a.cols_, a.nvars_);
  for (size_t k = 0; k < m.entries_.size(); ++k) m.entries_[k] = a.entries_[k] - b.entries_[k];
  return m;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatchError("PolyMatrix: shape mismatch");
  PolyMatrix m(a.rows_, b.cols_, a.nvars_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      if (a.at(i, k).is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) {
        if (b.at(k, j).is_zero()) continue;
        m.at(i, j) = m.at(i, j) + a.at(i, k) * b.at(k, j);
      }
    }
  return m;
}

PolyMatrix PolyMatrix::adjoint() const {
  PolyMatrix m(cols_, rows_, nvars_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j).adjoint();
  return m;
}

Eigen::MatrixXcd PolyMatrix::eval(const MatrixTuple& x) const {
  if (nvars_ > x.n) throw DimensionMismatchError("PolyMatrix::eval: tuple has too few matrices");
  int d = x.dim;
  Eigen::MatrixXcd out(rows_ * d, cols_ * d);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.block(i * d, j * d, d, d) = at(i, j).eval(x);
  return out;
}

NcPoly left_transduction(const Word& a, const NcPoly& b) {
  NcPoly r(b.nvars());
  int k = a.degree();
  for (const auto& [w, c] : b.terms()) {
    if (!w.ends_with(a)) continue;
    Word t = w.drop_suffix(k);
    ExactScalar s = r.coeff(t) + c;
    r.set_coeff(t, s);
  }
  return r;
}

namespace {

void enumerate_words(int nvars, int length, std::vector<Word>& out) {
  std::function<void(Word&)> rec = [&](Word& w) {
    if (w.degree() == length) {
      out.push_back(w);
      return;
    }
    for (int l = 1; l <= nvars; ++l) {
      w.letters.push_back(l);
      rec(w);
      w.letters.pop_back();
    }
  };
  Word w;
  rec(w);
}

// Tries to express the leading form of tuple[i] as a combination of the
// other entries' leading forms with homogeneous cofactors of matching
// degree: LT(a_i) = sum_j LT(a_j) * c_j   (Right side; mirrored for Left).
// Returns the cofactors c_j (full polynomials, index-aligned with tuple)
// when solvable.
std::optional<std::vector<NcPoly>> leading_form_reduction(const std::vector<NcPoly>& tuple,
                                                          size_t i, Side side) {
  const int nvars = tuple[i].nvars();
  const int di = tuple[i].degree();
  NcPoly target = tuple[i].leading_form();

  struct Block {
    size_t j;
    std::vector<Word> words;  // cofactor words of degree di - dj
    NcPoly lead;
  };
  std::vector<Block> blocks;
  int total_unknowns = 0;
  for (size_t j = 0; j < tuple.size(); ++j) {
    if (j == i || tuple[j].is_zero()) continue;
    int dj = tuple[j].degree();
    if (dj > di) continue;
    Block b;
    b.j = j;
    b.lead = tuple[j].leading_form();
    enumerate_words(nvars, di - dj, b.words);
    total_unknowns += int(b.words.size());
    blocks.push_back(std::move(b));
  }
  if (total_unknowns == 0) return std::nullopt;

  // Row index: words of degree di that occur anywhere.
  std::map<Word, int> row_of;
  auto row_id = [&](const Word& w) {
    auto [it, inserted] = row_of.emplace(w, int(row_of.size()));
    return it->second;
  };
  for (const auto& [w, c] : target.terms()) row_id(w);
  struct Entry {
    int row, col;
    ExactScalar val;
  };
  std::vector<Entry> entries;
  int col = 0;
  for (const auto& b : blocks) {
    for (const auto& w : b.words) {
      for (const auto& [u, cu] : b.lead.terms()) {
        Word prod = side == Side::Right ? u * w : w * u;
        entries.push_back({row_id(prod), col, cu});
      }
      ++col;
    }
  }

  ExactMatrix A(int(row_of.size()), total_unknowns);
  for (const auto& e : entries) A.at(e.row, e.col) += e.val;
  ExactMatrix rhs(int(row_of.size()), 1);
  for (const auto& [w, c] : target.terms()) rhs.at(row_of.at(w), 0) = c;

  auto sol = A.solve(rhs);
  if (!sol) return std::nullopt;

  std::vector<NcPoly> cofactors(tuple.size(), NcPoly(nvars));
  col = 0;
  for (const auto& b : blocks) {
    NcPoly c(nvars);
    for (const auto& w : b.words) {
      ExactScalar v = sol->at(col, 0);
      if (!v.is_zero()) c.set_coeff(w, c.coeff(w) + v);
      ++col;
    }
    cofactors[b.j] = c;
  }
  return cofactors;
}

// Index of the next reducible entry: highest degree first, later entries
// first on ties. Returns tuple.size() when none is reducible.
size_t find_reducible(const std::vector<NcPoly>& tuple, Side side,
                      std::optional<std::vector<NcPoly>>* cof_out) {
  std::vector<size_t> order;
  for (size_t k = 0; k < tuple.size(); ++k)
    if (!tuple[k].is_zero()) order.push_back(k);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    int da = tuple[a].degree(), db = tuple[b].degree();
    if (da != db) return da > db;
    return a > b;
  });
  for (size_t k : order) {
    auto cof = leading_form_reduction(tuple, k, side);
    if (cof) {
      *cof_out = std::move(cof);
      return k;
    }
  }
  return tuple.size();
}

}  // namespace

bool d_independent(const std::vector<NcPoly>& tuple, Side side) {
  std::optional<std::vector<NcPoly>> cof;
  return find_reducible(tuple, side, &cof) == tuple.size();
}

DIndependenceReduction d_independence_reduce(const std::vector<NcPoly>& tuple, Side side) {
  if (tuple.empty()) throw DimensionMismatchError("d_independence_reduce: empty tuple");
  const int nvars = tuple[0].nvars();
  for (const auto& p : tuple)
    if (p.nvars() != nvars) throw VariableMismatchError("d_independence_reduce: nvars mismatch");
  const int k = int(tuple.size());

  DIndependenceReduction res;
  res.reduced = tuple;
  res.transform = PolyMatrix::identity(k, nvars);
  res.transform_inverse = PolyMatrix::identity(k, nvars);

  while (true) {
    std::optional<std::vector<NcPoly>> cof;
    size_t i = find_reducible(res.reduced, side, &cof);
    if (i == res.reduced.size()) break;

    // Elementary transform: entry i gets the combination subtracted.
    PolyMatrix e = PolyMatrix::identity(k, nvars);
    PolyMatrix einv = PolyMatrix::identity(k, nvars);
    NcPoly acc(nvars);
    for (size_t j = 0; j < cof->size(); ++j) {
      if ((*cof)[j].is_zero()) continue;
      if (side == Side::Right) {
        e.at(int(j), int(i)) = -(*cof)[j];
        einv.at(int(j), int(i)) = (*cof)[j];
        acc = acc + res.reduced[j] * (*cof)[j];
      } else {
        e.at(int(i), int(j)) = -(*cof)[j];
        einv.at(int(i), int(j)) = (*cof)[j];
        acc = acc + (*cof)[j] * res.reduced[j];
      }
    }
    res.reduced[i] = res.reduced[i] - acc;
    if (side == Side::Right) {
      res.transform = res.transform * e;
      res.transform_inverse = einv * res.transform_inverse;
    } else {
      res.transform = e * res.transform;
      res.transform_inverse = res.transform_inverse * einv;
    }
    ++res.steps;
  }
  return res;
}

}  // namespace ncfield
