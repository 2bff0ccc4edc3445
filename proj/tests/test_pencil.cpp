#include <doctest.h>

#include <random>

#include "ncfield/ncrank.hpp"
#include "ncfield/pencil.hpp"

using namespace ncfield;

namespace {

Eigen::MatrixXcd pauli(int k) {
  Eigen::MatrixXcd m(2, 2);
  using C = std::complex<double>;
  if (k == 0)
    m << 0, 1, 1, 0;
  else if (k == 1)
    m << 0, C(0, -1), C(0, 1), 0;
  else
    m << 1, 0, 0, -1;
  return m;
}

LinearPencil pauli_pencil() {
  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 2);
  return LinearPencil::from_float({zero, pauli(0), pauli(1), pauli(2)}, true);
}

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  return m;
}

LinearPencil random_selfadjoint_pencil(std::mt19937_64& rng, int N, int n) {
  std::vector<Eigen::MatrixXcd> coeffs;
  for (int i = 0; i <= n; ++i) {
    Eigen::MatrixXcd g = random_matrix(rng, N);
    coeffs.push_back(0.5 * (g + g.adjoint()));
  }
  return LinearPencil::from_float(coeffs, true);
}

}  // namespace

TEST_CASE("pencil extraction from a linear poly matrix") {
  PolyMatrix p(2, 2, 1);
  p.at(0, 0) = NcPoly::variable(1, 1);
  p.at(0, 1) = NcPoly(1, ExactScalar(1));
  p.at(1, 0) = NcPoly(1, ExactScalar(1));
  LinearPencil a = pencil_from_poly_matrix(p);
  CHECK(a.coeffs[0].at(0, 1) == ExactScalar(1));
  CHECK(a.coeffs[0].at(1, 0) == ExactScalar(1));
  CHECK(a.coeffs[0].at(0, 0) == ExactScalar(0));
  CHECK(a.coeffs[1].at(0, 0) == ExactScalar(1));
  CHECK(pencil_to_poly_matrix(a) == p);
}

TEST_CASE("constant matrix extracts into A0 only") {
  PolyMatrix p(2, 2, 2);
  p.at(0, 0) = NcPoly(2, ExactScalar(3));
  p.at(1, 1) = NcPoly(2, ExactScalar(-1));
  LinearPencil a = pencil_from_poly_matrix(p);
  CHECK(a.coeffs[0].at(0, 0) == ExactScalar(3));
  CHECK(a.coeffs[1].is_zero());
  CHECK(a.coeffs[2].is_zero());
}

TEST_CASE("degree-two entry is rejected") {
  PolyMatrix p(1, 1, 1);
  NcPoly x = NcPoly::variable(1, 1);
  p.at(0, 0) = x * x;
  CHECK_THROWS_AS(pencil_from_poly_matrix(p), NotLinearError);

  PolyMatrix q(1, 2, 1);
  CHECK_THROWS_AS(pencil_from_poly_matrix(q), NotSquareError);
}

TEST_CASE("hollow: two zero columns in a 3x3 matrix") {
  PolyMatrix p(3, 3, 1);
  for (int i = 0; i < 3; ++i) p.at(i, 2) = NcPoly::variable(1, 1);
  auto w = is_hollow(p);
  REQUIRE(w.has_value());
  CHECK(w->rows.size() == 3);
  CHECK(w->cols.size() == 2);
  for (int r : w->rows)
    for (int c : w->cols) CHECK(p.at(r, c).is_zero());
}

TEST_CASE("single off-diagonal zero is not hollow") {
  PolyMatrix p(2, 2, 1);
  p.at(0, 0) = NcPoly::variable(1, 1);
  p.at(0, 1) = NcPoly(1, ExactScalar(1));
  p.at(1, 0) = NcPoly(1, ExactScalar(1));
  CHECK(!is_hollow(p).has_value());
}

TEST_CASE("hollow witness bounds the blow-up rank") {
  // rho <= m + n - r - s for hollow matrices.
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    int N = 3 + int(rng() % 2);
    int r0 = 2, s0 = N - 1;  // planted zero block, r0 + s0 > N
    PolyMatrix p(N, N, 2);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (i < r0 && j < s0) continue;
        int pick = int(rng() % 3);
        if (pick == 0)
          p.at(i, j) = NcPoly::variable(1, 2);
        else if (pick == 1)
          p.at(i, j) = NcPoly::variable(2, 2);
        else
          p.at(i, j) = NcPoly(2, ExactScalar(1));
      }
    auto w = is_hollow(p);
    REQUIRE(w.has_value());
    int bound = 2 * N - int(w->rows.size()) - int(w->cols.size());
    int rho = inner_rank_poly(p, InnerRankMethod::Blowup, 42 + rep);
    CHECK(rho <= bound);
    CHECK(rho < N);  // hollow is never full
  }
}

TEST_CASE("Koenig search agrees with exhaustive subset search") {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 60; ++rep) {
    int m = 1 + int(rng() % 5), n = 1 + int(rng() % 5);
    std::vector<std::vector<bool>> nz(m, std::vector<bool>(n, false));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) nz[i][j] = rng() % 3 != 0;
    // Exhaustive oracle: best r + s over all row subsets.
    int best = 0;
    for (int mask = 1; mask < (1 << m); ++mask) {
      int r = 0;
      for (int i = 0; i < m; ++i)
        if (mask & (1 << i)) ++r;
      int s = 0;
      for (int j = 0; j < n; ++j) {
        bool all_zero = true;
        for (int i = 0; i < m; ++i)
          if ((mask & (1 << i)) && nz[i][j]) all_zero = false;
        if (all_zero) ++s;
      }
      best = std::max(best, r + s);
    }
    bool oracle_hollow = best > std::max(m, n);
    auto got = is_hollow_pattern(nz);
    CHECK(got.has_value() == oracle_hollow);
    if (got) {
      CHECK(int(got->rows.size() + got->cols.size()) == best);
      for (int r : got->rows)
        for (int c : got->cols) CHECK(!nz[r][c]);
    }
  }
}

TEST_CASE("quantum operator with identity coefficient") {
  LinearPencil p(2, 1);
  p.coeffs[1] = ExactMatrix::identity(2);
  std::mt19937_64 rng(3);
  Eigen::MatrixXcd b = random_matrix(rng, 2);
  CHECK((quantum_operator(p, b) - b).norm() == doctest::Approx(0.0));
}

TEST_CASE("Pauli triple quantum operator is 2 tr(b) 1 - b") {
  LinearPencil p = pauli_pencil();
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::MatrixXcd b = random_matrix(rng, 2);
    Eigen::MatrixXcd expected = 2.0 * b.trace() * Eigen::MatrixXcd::Identity(2, 2) - b;
    CHECK((quantum_operator(p, b) - expected).norm() < 1e-12 * (1 + expected.norm()));
  }
}

TEST_CASE("quantum operator is linear and positivity preserving") {
  std::mt19937_64 rng(6);
  LinearPencil p = random_selfadjoint_pencil(rng, 3, 2);
  Eigen::MatrixXcd b1 = random_matrix(rng, 3), b2 = random_matrix(rng, 3);
  std::complex<double> s(1.5, -0.5);
  Eigen::MatrixXcd lhs = quantum_operator(p, s * b1 + b2);
  Eigen::MatrixXcd rhs = s * quantum_operator(p, b1) + quantum_operator(p, b2);
  CHECK((lhs - rhs).norm() < 1e-12 * (1 + rhs.norm()));
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::MatrixXcd g = random_matrix(rng, 3);
    Eigen::MatrixXcd psd = g * g.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(quantum_operator(p, psd));
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("flatness constants for the Pauli triple") {
  FlatnessReport rep = flatness_constants(pauli_pencil(), 16, 200, 0);
  CHECK(rep.c_lower == doctest::Approx(2.0).epsilon(0.005));
  CHECK(rep.semi_flat);
  CHECK(rep.c_lower <= rep.c_upper + 1e-9);
  // Upper constant: max eigenvalue of 2*1 - vv* is 2, times N.
  CHECK(rep.c_upper == doctest::Approx(4.0).epsilon(0.005));
}

TEST_CASE("rank-one coefficients give a vanishing semi-flat constant") {
  LinearPencil p(2, 2);
  p.coeffs[1].at(0, 0) = ExactScalar(1);
  p.coeffs[2].at(0, 0) = ExactScalar(1);
  FlatnessReport rep = flatness_constants(p, 16, 200, 0);
  CHECK(rep.c_lower == doctest::Approx(0.0));
  CHECK(!rep.semi_flat);
}

TEST_CASE("flatness lower bound dominates on random PSD matrices") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 6; ++rep) {
    LinearPencil p = random_selfadjoint_pencil(rng, 3, 2);
    FlatnessReport fr = flatness_constants(p, 24, 300, rep);
    CHECK(fr.c_lower <= fr.c_upper + 1e-9);
    for (int probe = 0; probe < 10; ++probe) {
      Eigen::MatrixXcd g = random_matrix(rng, 3);
      Eigen::MatrixXcd b = g * g.adjoint();
      double trn = b.trace().real() / 3.0;
      Eigen::MatrixXcd diff =
          quantum_operator(p, b) - fr.c_lower * trn * Eigen::MatrixXcd::Identity(3, 3);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff);
      CHECK(es.eigenvalues().minCoeff() > -1e-8 * (1 + b.norm()));
    }
  }
}

TEST_CASE("c_lower <= c_upper on random selfadjoint pencils") {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 50; ++rep) {
    LinearPencil p = random_selfadjoint_pencil(rng, 2 + int(rng() % 2), 1 + int(rng() % 2));
    FlatnessReport fr = flatness_constants(p, 8, 80, rep);
    CHECK(fr.c_lower <= fr.c_upper + 1e-9);
  }
}

TEST_CASE("monic_reduce on an already monic pencil") {
  // A1 = identity makes the stacked homogeneous coefficients left invertible.
  LinearPencil p(2, 1);
  p.coeffs[0].at(0, 1) = ExactScalar(1);
  p.coeffs[1] = ExactMatrix::identity(2);
  CHECK(is_left_monic(p));
  MonicReduction mr = monic_reduce(p);
  CHECK(mr.s == 0);
  CHECK(mr.U.is_identity());
  CHECK(mr.Q == PolyMatrix::identity(2, 1));
  CHECK(mr.B.N == 2);
}

TEST_CASE("monic_reduce splits off a constant block") {
  LinearPencil p(2, 1);  // [[x1, 0], [0, 1]]
  p.coeffs[1].at(0, 0) = ExactScalar(1);
  p.coeffs[0].at(1, 1) = ExactScalar(1);
  MonicReduction mr = monic_reduce(p);
  CHECK(mr.s == 1);
  CHECK(mr.B.N == 1);
  CHECK(mr.B.coeffs[1].at(0, 0) == ExactScalar(1));
  CHECK(mr.B.coeffs[0].at(0, 0) == ExactScalar(0));
  CHECK(is_left_monic(mr.B));
}

TEST_CASE("monic_reduce identity U P Q = diag(B, 1_s) on random full pencils") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> coeff(-2, 2);
  int done = 0;
  while (done < 15) {
    int N = 2 + int(rng() % 2);
    int n = 1 + int(rng() % 2);
    LinearPencil p(N, n);
    for (int k = 0; k <= n; ++k)
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) p.coeffs[k].at(i, j) = ExactScalar(coeff(rng));
    if (blowup_rank(p, N, 3, 1e-10, 77) != N) continue;  // want full inputs
    ++done;
    MonicReduction mr = monic_reduce(p);
    CHECK(is_left_monic(mr.B));
    CHECK((mr.Q * mr.Q_inverse) == PolyMatrix::identity(N, n));

    // Exact identity U * P * Q == diag(B, 1_s).
    PolyMatrix upq = PolyMatrix::from_scalar(mr.U, n) * pencil_to_poly_matrix(p) * mr.Q;
    PolyMatrix expected(N, N, n);
    PolyMatrix bp = pencil_to_poly_matrix(mr.B);
    for (int i = 0; i < mr.B.N; ++i)
      for (int j = 0; j < mr.B.N; ++j) expected.at(i, j) = bp.at(i, j);
    for (int k = mr.B.N; k < N; ++k) expected.at(k, k) = NcPoly(n, ExactScalar(1));
    CHECK(upq == expected);
  }
}

TEST_CASE("monic_reduce rejects a non-full pencil") {
  LinearPencil p(2, 1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) p.coeffs[1].at(i, j) = ExactScalar(1);
  CHECK_THROWS_AS(monic_reduce(p), NotReducibleError);
}
