#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ncfield {

/// Exact complex scalar: rational real and imaginary parts.
/// Closed under +, -, * and division by nonzero; equality is exact.
struct ExactScalar {
  mpq_class re;
  mpq_class im;

  ExactScalar() : re(0), im(0) {}
  ExactScalar(int r) : re(r), im(0) {}         // NOLINT: implicit by design
  ExactScalar(long r) : re(r), im(0) {}        // NOLINT: implicit by design
  ExactScalar(long num, long den) : re(mpq_class(num, den)), im(0) { re.canonicalize(); }
  explicit ExactScalar(double r) : re(r), im(0) {}
  ExactScalar(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

  static ExactScalar imaginary_unit() { return ExactScalar(mpq_class(0), mpq_class(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_one() const { return re == 1 && im == 0; }
  bool is_real() const { return im == 0; }

  ExactScalar conj() const { return ExactScalar(re, mpq_class(-im)); }
  mpq_class norm2() const { return mpq_class(re * re + im * im); }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  ExactScalar operator-() const { return ExactScalar(mpq_class(-re), mpq_class(-im)); }

  ExactScalar& operator+=(const ExactScalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ExactScalar& operator-=(const ExactScalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ExactScalar& operator*=(const ExactScalar& o) {
    mpq_class r(re * o.re - im * o.im);
    mpq_class i(re * o.im + im * o.re);
    re = r;
    im = i;
    return *this;
  }
  ExactScalar& operator/=(const ExactScalar& o);

  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }
  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

  /// Canonical text form: "0", "3/2", "-2", "(1+1i)", "(3/2-1/2i)", "1i".
  std::string str() const;
};

/// Parses a rational or decimal literal, e.g. "3/2", "-0.25", "7".
mpq_class parse_rational(const std::string& text);

/// Parses a scalar literal: rational/decimal with optional trailing 'i',
/// or a parenthesized complex "(a+bi)".
ExactScalar parse_scalar(const std::string& text);

/// Dense matrix over ExactScalar with exact Gaussian elimination.
class ExactMatrix {
 public:
  ExactMatrix() : rows_(0), cols_(0) {}
  ExactMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

  static ExactMatrix identity(int n);
  static ExactMatrix zero(int rows, int cols) { return ExactMatrix(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  ExactScalar& at(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const ExactScalar& at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  bool is_zero() const;
  bool is_identity() const;

  ExactMatrix conj_transpose() const;
  ExactMatrix block(int i0, int j0, int r, int c) const;
  void set_block(int i0, int j0, const ExactMatrix& m);

  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  ExactMatrix scaled(const ExactScalar& s) const;

  int rank() const;
  /// Inverse by Gauss-Jordan; nullopt when singular.
  std::optional<ExactMatrix> inverse() const;
  /// One nonzero kernel vector (as a cols x 1 matrix), or nullopt when the
  /// matrix has full column rank.
  std::optional<ExactMatrix> null_vector() const;
  /// Basis of the kernel, one column per free variable.
  ExactMatrix null_space() const;
  /// Solves this * x = rhs; free variables are set to zero. nullopt when
  /// the system is inconsistent.
  std::optional<ExactMatrix> solve(const ExactMatrix& rhs) const;

 private:
  // Row-echelon reduction of a working copy; returns pivot columns.
  static std::vector<int> row_reduce(ExactMatrix& m);

  int rows_;
  int cols_;
  std::vector<ExactScalar> a_;
};

}  // namespace ncfield
