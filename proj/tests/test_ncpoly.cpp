#include <doctest.h>

#include <random>

#include "ncfield/ncpoly.hpp"

using namespace ncfield;

namespace {

NcPoly random_poly(std::mt19937_64& rng, int nvars, int max_deg, int max_terms) {
  std::uniform_int_distribution<int> deg(0, max_deg), var(1, nvars), coeff(-4, 4),
      nterms(1, max_terms);
  NcPoly p(nvars);
  int t = nterms(rng);
  for (int k = 0; k < t; ++k) {
    Word w;
    int d = deg(rng);
    for (int i = 0; i < d; ++i) w.letters.push_back(var(rng));
    int c = coeff(rng);
    if (c == 0) c = 1;
    p.set_coeff(w, p.coeff(w) + ExactScalar(c));
  }
  return p;
}

MatrixTuple random_tuple(std::mt19937_64& rng, int n, int d, bool selfadjoint) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::MatrixXcd> mats;
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    if (selfadjoint) m = 0.5 * (m + m.adjoint()).eval();
    mats.push_back(m);
  }
  return MatrixTuple(std::move(mats), selfadjoint);
}

}  // namespace

TEST_CASE("monomial concatenation") {
  NcPoly x1 = NcPoly::variable(1, 2), x2 = NcPoly::variable(2, 2);
  NcPoly p = x1 * x2;
  CHECK(p.terms().size() == 1);
  CHECK(p.coeff(Word({1, 2})) == ExactScalar(1));
}

TEST_CASE("one-variable difference of squares") {
  NcPoly x = NcPoly::variable(1, 1), one(1, ExactScalar(1));
  NcPoly p = (x + one) * (x - one);
  CHECK(p == x * x - one);
}

TEST_CASE("degree law on a concrete product") {
  NcPoly x1 = NcPoly::variable(1, 3), x2 = NcPoly::variable(2, 3), x3 = NcPoly::variable(3, 3);
  NcPoly a = x1 * x2 + NcPoly(3, ExactScalar(1));
  CHECK((a * x3).degree() == 3);
  CHECK((a * x3).degree() == a.degree() + x3.degree());
}

TEST_CASE("degree law d(ab) = d(a) + d(b) holds exactly") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    NcPoly a = random_poly(rng, 3, 4, 4), b = random_poly(rng, 3, 4, 4);
    if (a.is_zero() || b.is_zero()) continue;
    CHECK((a * b).degree() == a.degree() + b.degree());
    NcPoly s = a + b;
    if (!s.is_zero()) CHECK(s.degree() <= std::max(a.degree(), b.degree()));
  }
}

TEST_CASE("adjoint reverses words and conjugates") {
  NcPoly x1 = NcPoly::variable(1, 2), x2 = NcPoly::variable(2, 2);
  NcPoly p = (x1 * x2).scaled(ExactScalar::imaginary_unit());
  NcPoly q = p.adjoint();
  CHECK(q.coeff(Word({2, 1})) == -ExactScalar::imaginary_unit());
  CHECK(q.terms().size() == 1);

  CHECK(x1.adjoint() == x1);
  CHECK(p.adjoint().adjoint() == p);
}

TEST_CASE("adjoint is an antihomomorphism (expansion oracle)") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    NcPoly p = random_poly(rng, 2, 3, 3), q = random_poly(rng, 2, 3, 3);
    NcPoly pq = p * q;
    CHECK(pq.adjoint() == q.adjoint() * p.adjoint());
    // Term-by-term oracle: reverse each word and conjugate each coefficient.
    NcPoly oracle(p.nvars());
    for (const auto& [w, c] : pq.terms()) oracle.set_coeff(w.reversed(), c.conj());
    CHECK(oracle == pq.adjoint());
  }
}

TEST_CASE("evaluation of a bare variable") {
  PolyMatrix p(1, 1, 1);
  p.at(0, 0) = NcPoly::variable(1, 1);
  Eigen::MatrixXcd x1(2, 2);
  x1 << 0, 1, 1, 0;
  MatrixTuple t({x1}, true);
  CHECK((p.eval(t) - x1).norm() == doctest::Approx(0.0));
}

TEST_CASE("evaluation respects the involution on selfadjoint tuples") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    NcPoly p = random_poly(rng, 2, 3, 4);
    MatrixTuple t = random_tuple(rng, 2, 3, true);
    Eigen::MatrixXcd lhs = p.adjoint().eval(t);
    Eigen::MatrixXcd rhs = p.eval(t).adjoint();
    CHECK((lhs - rhs).norm() < 1e-10 * (1 + rhs.norm()));
  }
}

TEST_CASE("evaluation is a unital homomorphism") {
  std::mt19937_64 rng(17);
  NcPoly one(2, ExactScalar(1));
  MatrixTuple t = random_tuple(rng, 2, 4, false);
  CHECK((one.eval(t) - Eigen::MatrixXcd::Identity(4, 4)).norm() == doctest::Approx(0.0));
  for (int rep = 0; rep < 20; ++rep) {
    NcPoly p = random_poly(rng, 2, 3, 4), q = random_poly(rng, 2, 3, 4);
    CHECK(((p + q).eval(t) - (p.eval(t) + q.eval(t))).norm() < 1e-10);
    Eigen::MatrixXcd prod = p.eval(t) * q.eval(t);
    CHECK(((p * q).eval(t) - prod).norm() < 1e-10 * (1 + prod.norm()));
  }
}

TEST_CASE("blockwise matrix evaluation multiplies") {
  std::mt19937_64 rng(19);
  MatrixTuple t = random_tuple(rng, 2, 2, false);
  PolyMatrix a(2, 2, 2), b(2, 2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a.at(i, j) = random_poly(rng, 2, 2, 2);
      b.at(i, j) = random_poly(rng, 2, 2, 2);
    }
  Eigen::MatrixXcd prod = a.eval(t) * b.eval(t);
  CHECK(((a * b).eval(t) - prod).norm() < 1e-10 * (1 + prod.norm()));
}

TEST_CASE("left transduction on monomial suffixes") {
  NcPoly p = NcPoly::monomial(Word({2, 1}), ExactScalar(1), 3);
  NcPoly r = left_transduction(Word({1}), p);
  CHECK(r == NcPoly::monomial(Word({2}), ExactScalar(1), 3));

  NcPoly q = NcPoly::monomial(Word({1, 2}), ExactScalar(1), 3);
  CHECK(left_transduction(Word({1}), q).is_zero());

  NcPoly s = NcPoly::monomial(Word({3, 2, 1}), ExactScalar(1), 3) + NcPoly::variable(1, 3);
  CHECK(left_transduction(Word({2, 1}), s) == NcPoly::variable(3, 3));

  // Unit word acts as the identity.
  CHECK(left_transduction(Word(), s) == s);
  // Degree bound d(L_a(b)) <= d(b) - |a|.
  CHECK(left_transduction(Word({2, 1}), s).degree() <= s.degree() - 2);
}

TEST_CASE("d-independence reduction: equal entries") {
  NcPoly x1 = NcPoly::variable(1, 1);
  auto res = d_independence_reduce({x1, x1}, Side::Right);
  CHECK(res.reduced[0] == x1);
  CHECK(res.reduced[1].is_zero());
  CHECK(res.transform.at(0, 0) == NcPoly(1, ExactScalar(1)));
  CHECK(res.transform.at(0, 1) == NcPoly(1, ExactScalar(-1)));
  CHECK(res.transform.at(1, 0).is_zero());
  CHECK(res.transform.at(1, 1) == NcPoly(1, ExactScalar(1)));
  // Verified by multiplication: (x1, x1) * T == reduced.
  PolyMatrix row(1, 2, 1);
  row.at(0, 0) = x1;
  row.at(0, 1) = x1;
  PolyMatrix out = row * res.transform;
  CHECK(out.at(0, 0) == res.reduced[0]);
  CHECK(out.at(0, 1) == res.reduced[1]);
}

TEST_CASE("d-independence reduction: unit entry absorbs the rest") {
  // (1, x1) is right d-dependent: 1 * (-x1) + x1 * 1 cancels in top degree,
  // so the reduction zeroes the higher-degree entry.
  NcPoly one(1, ExactScalar(1)), x1 = NcPoly::variable(1, 1);
  auto res = d_independence_reduce({one, x1}, Side::Right);
  CHECK(res.reduced[0] == one);
  CHECK(res.reduced[1].is_zero());
  CHECK(d_independent(res.reduced, Side::Right));
}

TEST_CASE("d-independence reduction: degree drop with probes") {
  NcPoly x1 = NcPoly::variable(1, 2), x2 = NcPoly::variable(2, 2);
  auto res = d_independence_reduce({x1 * x2, x1}, Side::Right);
  CHECK(d_independent(res.reduced, Side::Right));
  // Random high-degree multiplier probes: equality in the degree law for
  // the surviving entries.
  std::mt19937_64 rng(23);
  std::vector<NcPoly> nonzero;
  for (const auto& p : res.reduced)
    if (!p.is_zero()) nonzero.push_back(p);
  for (int rep = 0; rep < 30; ++rep) {
    NcPoly acc(2);
    int maxd = NcPoly::kDegreeOfZero;
    bool all_zero = true;
    std::vector<NcPoly> bs;
    for (const auto& p : nonzero) {
      NcPoly b = random_poly(rng, 2, 3, 2);
      bs.push_back(b);
      if (!b.is_zero()) {
        all_zero = false;
        maxd = std::max(maxd, p.degree() + b.degree());
      }
      acc = acc + p * b;
    }
    if (all_zero) continue;
    CHECK(acc.degree() == maxd);
  }
}

TEST_CASE("d-independence transform times its inverse is the identity") {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 25; ++rep) {
    std::vector<NcPoly> tuple;
    int k = 2 + int(rng() % 2);
    for (int i = 0; i < k; ++i) tuple.push_back(random_poly(rng, 2, 2, 2));
    for (Side side : {Side::Right, Side::Left}) {
      auto res = d_independence_reduce(tuple, side);
      PolyMatrix prod = res.transform * res.transform_inverse;
      CHECK(prod == PolyMatrix::identity(k, 2));
      CHECK(d_independent(res.reduced, side));
      // Transform reproduces the reduction.
      PolyMatrix vec(side == Side::Right ? 1 : k, side == Side::Right ? k : 1, 2);
      for (int i = 0; i < k; ++i) {
        if (side == Side::Right)
          vec.at(0, i) = tuple[size_t(i)];
        else
          vec.at(i, 0) = tuple[size_t(i)];
      }
      PolyMatrix out = side == Side::Right ? vec * res.transform : res.transform * vec;
      for (int i = 0; i < k; ++i) {
        const NcPoly& got = side == Side::Right ? out.at(0, i) : out.at(i, 0);
        CHECK(got == res.reduced[size_t(i)]);
      }
    }
  }
}

TEST_CASE("polynomial text format round-trips") {
  NcPoly p = parse_poly("(3/2+1/2i)*x1*x2^3 - x2 + 1");
  CHECK(p.nvars() == 2);
  CHECK(p.coeff(Word({1, 2, 2, 2})) == ExactScalar(mpq_class(3, 2), mpq_class(1, 2)));
  CHECK(p.coeff(Word({2})) == ExactScalar(-1));
  CHECK(p.coeff(Word()) == ExactScalar(1));
  CHECK(parse_poly(p.str()) == p);

  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 40; ++rep) {
    NcPoly q = random_poly(rng, 3, 4, 5);
    CHECK(parse_poly(q.str(), 3) == q);
  }
  CHECK(parse_poly("0").is_zero());
  CHECK_THROWS_AS(parse_poly("x1 + * 2"), SyntaxError);
}

TEST_CASE("variable count mismatch is rejected") {
  NcPoly a = NcPoly::variable(1, 1), b = NcPoly::variable(1, 2);
  CHECK_THROWS_AS(a + b, VariableMismatchError);
  CHECK_THROWS_AS(a * b, VariableMismatchError);
}

TEST_CASE("selfadjoint tuple flag is validated") {
  Eigen::MatrixXcd m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(MatrixTuple({m}, true), NotSelfadjointError);
}
