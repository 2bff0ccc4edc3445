#include <doctest.h>

#include <random>

#include "ncfield/freefield.hpp"

using namespace ncfield;

namespace {

RationalFunction rf(const std::string& text, std::uint64_t seed = 0) {
  return RationalFunction::from_expr(parse_expr(text), seed);
}

MatrixTuple random_tuple(std::mt19937_64& rng, int n, int d) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::MatrixXcd> mats;
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    mats.push_back(m);
  }
  return MatrixTuple(std::move(mats), false);
}

int random_expr_node(ExprBuilder& b, std::mt19937_64& rng, int depth, int nvars) {
  std::uniform_int_distribution<int> pick(0, 9);
  int p = depth == 0 ? pick(rng) % 4 : pick(rng);
  if (p < 2) return b.variable(1 + int(rng() % nvars));
  if (p < 4) {
    static const int consts[] = {1, 2, -1, 3};
    return b.constant(ExactScalar(consts[rng() % 4], 1 + int(rng() % 2)));
  }
  if (p < 6) return b.add(random_expr_node(b, rng, depth - 1, nvars),
                          random_expr_node(b, rng, depth - 1, nvars));
  if (p < 8) return b.mul(random_expr_node(b, rng, depth - 1, nvars),
                          random_expr_node(b, rng, depth - 1, nvars));
  return b.inv(random_expr_node(b, rng, depth - 1, nvars));
}

}  // namespace

TEST_CASE("from_expr wraps a variable in a dim-2 representation") {
  RationalFunction f = rf("x1");
  CHECK(f.dim() == 2);
  CHECK(f.certificate().kind == RankCertificate::Kind::Full);
}

TEST_CASE("inv(0) is admissible as an expression but not regular") {
  CHECK_THROWS_AS(rf("inv(0)"), NotRegularError);
}

TEST_CASE("inverting the zero function 1 - y*inv(x*y)*x is not regular") {
  CHECK_THROWS_AS(rf("inv(1 - y*inv(x*y)*x)"), NotRegularError);
}

TEST_CASE("r + (-1) r is the zero function") {
  RationalFunction r = rf("x1*x2 + inv(x1 + 2)");
  RationalFunction diff = rf_add(r, rf_neg(r));
  CHECK(diff.is_zero());
}

TEST_CASE("double inverse is the identity on x1 + 1") {
  RationalFunction r = rf("x1 + 1");
  RationalFunction rr = rf_inv(rf_inv(r));
  CHECK(equals(rr, r));
}

TEST_CASE("block dimension laws for the arithmetic") {
  RationalFunction a = rf("x1"), b = rf("x2 + 1");
  CHECK(rf_add(a, b).dim() == a.dim() + b.dim());
  CHECK(rf_mul(a, b).dim() == a.dim() + b.dim());
  CHECK(rf_inv(b).dim() == b.dim() + 1);
  CHECK(rf_neg(a).dim() == a.dim());
}

TEST_CASE("zero test: y*inv(x*y)*x - 1 reduces to zero") {
  CHECK(rf("y*inv(x*y)*x - 1").is_zero());
}

TEST_CASE("zero test: the Hua-style identity reduces to zero") {
  CHECK(rf("inv(x - inv(y)) - inv(x) - inv(x*y*x - x)").is_zero());
}

TEST_CASE("zero test: commutator is not zero") {
  CHECK(!rf("x*y - y*x").is_zero());
}

TEST_CASE("equality: inv(x*y) equals inv(y)*inv(x)") {
  CHECK(equals(rf("inv(x*y)"), rf("inv(y)*inv(x)")));
  CHECK(!equals(rf("x"), rf("y")));
}

TEST_CASE("substituted rational relation B inv(A) B - C vanishes") {
  // A = y^2, B = y*x*y, C = y*x^2*y.
  RationalFunction f = rf("y*x*y*inv(y*y)*y*x*y - y*x*x*y");
  CHECK(f.is_zero());
}

TEST_CASE("evaluate_rf of a bare variable returns the matrix") {
  std::mt19937_64 rng(7);
  RationalFunction f = rf("x1");
  MatrixTuple x = random_tuple(rng, 1, 3);
  CHECK((evaluate_rf(f, x) - x.mats[0]).norm() < 1e-10);
}

TEST_CASE("evaluation is multiplicative on the common domain") {
  std::mt19937_64 rng(11);
  RationalFunction a = rf("inv(x) + y"), b = rf("x*y - 1");
  RationalFunction prod = rf_mul(a, b);
  int done = 0;
  while (done < 10) {
    MatrixTuple x = random_tuple(rng, 2, 3);
    try {
      Eigen::MatrixXcd va = evaluate_rf(a, x), vb = evaluate_rf(b, x);
      Eigen::MatrixXcd vp = evaluate_rf(prod, x);
      CHECK((vp - va * vb).norm() < 1e-8 * (1 + (va * vb).norm()));
      ++done;
    } catch (const DomainError&) {
    }
  }
}

TEST_CASE("zero functions evaluate to zero on sampled tuples") {
  std::mt19937_64 rng(13);
  RationalFunction z = rf("y*inv(x*y)*x - 1");
  REQUIRE(z.is_zero());
  int done = 0;
  for (int d = 2; d <= 4; ++d)
    for (int rep = 0; rep < 7 && done < 20; ++rep) {
      MatrixTuple x = random_tuple(rng, 2, d);
      try {
        CHECK(evaluate_rf(z, x).norm() <= 1e-6);
        ++done;
      } catch (const DomainError&) {
      }
    }
  CHECK(done >= 15);
}

TEST_CASE("nonzero functions show nonzero sampled evaluations") {
  std::mt19937_64 rng(17);
  RationalFunction f = rf("x*y - y*x");
  REQUIRE(!f.is_zero());
  double best = 0;
  for (int rep = 0; rep < 10; ++rep) {
    MatrixTuple x = random_tuple(rng, 2, 3);
    try {
      best = std::max(best, evaluate_rf(f, x).norm());
    } catch (const DomainError&) {
    }
  }
  CHECK(best > 1e-3);
}

TEST_CASE("equals is an equivalence relation on a small corpus") {
  std::vector<RationalFunction> fs;
  fs.push_back(rf("y*inv(x*y)*x"));
  fs.push_back(rf("1"));
  fs.push_back(rf("x*y"));
  fs.push_back(rf("inv(inv(x*y))"));
  // Reflexive.
  for (const auto& f : fs) CHECK(equals(f, f));
  // Symmetric + the expected classes: {0 ~ 1}, {2 ~ 3}.
  CHECK(equals(fs[0], fs[1]));
  CHECK(equals(fs[1], fs[0]));
  CHECK(equals(fs[2], fs[3]));
  CHECK(!equals(fs[0], fs[2]));
  // Transitivity spot-check within the class of 1.
  RationalFunction third = rf("inv(1)*1");
  CHECK(equals(fs[0], third));
  CHECK(equals(fs[1], third));
}

TEST_CASE("inversion round-trip on random nonzero functions") {
  std::mt19937_64 rng(19);
  int done = 0, generated = 0;
  while (done < 12 && generated < 400) {
    ++generated;
    ExprBuilder b;
    RatExpr e = b.finish(random_expr_node(b, rng, 3, 2));
    try {
      RationalFunction f = RationalFunction::from_expr(e, done);
      if (f.is_zero()) continue;
      CHECK(equals(rf_inv(rf_inv(f)), f));
      ++done;
    } catch (const NotRegularError&) {
      continue;
    }
  }
  CHECK(done == 12);
}

TEST_CASE("inverting the zero function is rejected") {
  RationalFunction z = rf("x - x");
  CHECK_THROWS_AS(rf_inv(z), DivisionByZeroFunctionError);
}
