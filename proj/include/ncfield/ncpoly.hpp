#pragma once

#include <Eigen/Dense>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/exact.hpp"

namespace ncfield {

/// Monomial over the free generators: a finite sequence of variable indices
/// in 1..nvars. The empty word is the unit monomial.
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> l) : letters(std::move(l)) {}

  int degree() const { return int(letters.size()); }
  bool is_unit() const { return letters.empty(); }

  Word operator*(const Word& o) const {
    Word w = *this;
    w.letters.insert(w.letters.end(), o.letters.begin(), o.letters.end());
    return w;
  }
  Word reversed() const {
    Word w = *this;
    std::reverse(w.letters.begin(), w.letters.end());
    return w;
  }
  bool ends_with(const Word& suffix) const;
  /// The word with `suffix` removed from the end; only valid if ends_with.
  Word drop_suffix(int k) const {
    return Word(std::vector<int>(letters.begin(), letters.end() - k));
  }

  friend bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }
  // Degree first, then lexicographic: canonical term order.
  friend bool operator<(const Word& a, const Word& b) {
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    return a.letters < b.letters;
  }
};

/// n complex square matrices of a common dimension: the evaluation point.
struct MatrixTuple {
  int n = 0;
  int dim = 0;
  std::vector<Eigen::MatrixXcd> mats;
  bool selfadjoint = false;

  MatrixTuple() = default;
  MatrixTuple(std::vector<Eigen::MatrixXcd> m, bool sa = false);
};

/// Noncommutative polynomial: finitely supported map from words to exact
/// complex scalars. No zero coefficients are stored; the term map is kept
/// sorted in degree-lexicographic order so printing is canonical.
class NcPoly {
 public:
  static constexpr int kDegreeOfZero = std::numeric_limits<int>::min();  // d(0) = -inf

  explicit NcPoly(int nvars = 0) : nvars_(nvars) {}
  NcPoly(int nvars, const ExactScalar& c);

  static NcPoly variable(int index, int nvars);
  static NcPoly constant(const ExactScalar& c, int nvars) { return NcPoly(nvars, c); }
  static NcPoly monomial(const Word& w, const ExactScalar& c, int nvars);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  const std::map<Word, ExactScalar>& terms() const { return terms_; }
  ExactScalar coeff(const Word& w) const;
  void set_coeff(const Word& w, const ExactScalar& c);

  /// Top homogeneous part (all terms of maximal degree). Zero for the zero
  /// polynomial.
  NcPoly leading_form() const;

  NcPoly operator-() const;
  friend NcPoly operator+(const NcPoly& a, const NcPoly& b);
  friend NcPoly operator-(const NcPoly& a, const NcPoly& b);
  friend NcPoly operator*(const NcPoly& a, const NcPoly& b);
  friend bool operator==(const NcPoly& a, const NcPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  NcPoly scaled(const ExactScalar& s) const;

  /// Word reversal with conjugated coefficients; 1* = 1 and x_i* = x_i.
  NcPoly adjoint() const;

  Eigen::MatrixXcd eval(const MatrixTuple& x) const;

  std::string str() const;

 private:
  void check_same_vars(const NcPoly& o) const;

  int nvars_;
  std::map<Word, ExactScalar> terms_;
};

/// Parses the polynomial text format, e.g. "(3/2+1/2i)*x1*x2^3 - x2 + 1".
NcPoly parse_poly(const std::string& text, int nvars_hint = 0);

/// Matrix over the free algebra; all entries share nvars.
class PolyMatrix {
 public:
  PolyMatrix() : rows_(0), cols_(0), nvars_(0) {}
  PolyMatrix(int rows, int cols, int nvars);

  static PolyMatrix identity(int n, int nvars);
  static PolyMatrix from_scalar(const ExactMatrix& m, int nvars);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nvars() const { return nvars_; }
  int degree() const;
  bool is_zero() const;

  NcPoly& at(int i, int j) { return entries_[size_t(i) * cols_ + j]; }
  const NcPoly& at(int i, int j) const { return entries_[size_t(i) * cols_ + j]; }

  PolyMatrix block(int i0, int j0, int r, int c) const;
  PolyMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const;

  friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  PolyMatrix adjoint() const;

  /// Blockwise evaluation: (rows*d) x (cols*d) complex matrix.
  Eigen::MatrixXcd eval(const MatrixTuple& x) const;

 private:
  int rows_, cols_, nvars_;
  std::vector<NcPoly> entries_;
};

/// Left transduction L_a: monomials of the form w*a map to w, everything
/// else to 0. The unit word acts as the identity map.
NcPoly left_transduction(const Word& a, const NcPoly& b);

enum class Side { Left, Right };

struct DIndependenceReduction {
  std::vector<NcPoly> reduced;
  PolyMatrix transform;          // reduced = tuple * transform (Right) or transform * tuple (Left)
  PolyMatrix transform_inverse;  // exact inverse, transform * inverse == identity
  int steps = 0;
};

/// Reduces a tuple of polynomials by an invertible transform until its
/// nonzero entries are d-independent on the requested side. Each round
/// cancels the leading form of the highest-degree reducible entry (later
/// entries first on degree ties).
DIndependenceReduction d_independence_reduce(const std::vector<NcPoly>& tuple, Side side);

/// True when no entry's leading form lies in the span of the other entries'
/// leading forms with matching degrees (and no entry is zero, unless the
/// tuple is allowed to carry zeros: zeros are skipped).
bool d_independent(const std::vector<NcPoly>& tuple, Side side);

}  // namespace ncfield
