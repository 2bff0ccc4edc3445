#include <doctest.h>

#include "ncfield/exact.hpp"

using namespace ncfield;

TEST_CASE("exact scalar field operations") {
  ExactScalar a(3, 2);  // 3/2
  ExactScalar b(mpq_class(1, 2), mpq_class(1, 2));
  CHECK(a + b == ExactScalar(mpq_class(2), mpq_class(1, 2)));
  CHECK((a * b).re == mpq_class(3, 4));
  CHECK((a * b).im == mpq_class(3, 4));

  ExactScalar q = a / b;
  CHECK(q * b == a);

  ExactScalar i = ExactScalar::imaginary_unit();
  CHECK(i * i == ExactScalar(-1));
  CHECK(i.conj() == -i);
  CHECK_THROWS(a / ExactScalar(0));
}

TEST_CASE("scalar parsing and printing round-trip") {
  CHECK(parse_scalar("3/2") == ExactScalar(3, 2));
  CHECK(parse_scalar("-0.25") == ExactScalar(-1, 4));
  CHECK(parse_scalar("2i") == ExactScalar(mpq_class(0), mpq_class(2)));
  CHECK(parse_scalar("(3/2+1/2i)") == ExactScalar(mpq_class(3, 2), mpq_class(1, 2)));
  CHECK(parse_scalar("(1-2i)") == ExactScalar(mpq_class(1), mpq_class(-2)));

  for (const auto& s : {ExactScalar(5), ExactScalar(-7, 3),
                        ExactScalar(mpq_class(1, 2), mpq_class(-3, 4)),
                        ExactScalar(mpq_class(0), mpq_class(1))}) {
    CHECK(parse_scalar(s.str()) == s);
  }
}

TEST_CASE("exact matrix rank, inverse, kernel") {
  ExactMatrix m(3, 3);
  // [[1,2,3],[0,1,4],[5,6,0]] is invertible over Q.
  int vals[3][3] = {{1, 2, 3}, {0, 1, 4}, {5, 6, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m.at(i, j) = ExactScalar(vals[i][j]);
  CHECK(m.rank() == 3);
  auto inv = m.inverse();
  REQUIRE(inv.has_value());
  CHECK((m * *inv).is_identity());
  CHECK(!m.null_vector().has_value());

  ExactMatrix s(2, 3);
  s.at(0, 0) = ExactScalar(1);
  s.at(0, 1) = ExactScalar(2);
  s.at(1, 0) = ExactScalar(2);
  s.at(1, 1) = ExactScalar(4);
  CHECK(s.rank() == 1);
  ExactMatrix ns = s.null_space();
  CHECK(ns.cols() == 2);
  CHECK((s * ns).is_zero());

  auto sol = m.solve(ExactMatrix::identity(3));
  REQUIRE(sol.has_value());
  CHECK((m * *sol).is_identity());
}

TEST_CASE("singular matrix has no inverse") {
  ExactMatrix m(2, 2);
  m.at(0, 0) = ExactScalar(1);
  m.at(0, 1) = ExactScalar(1);
  m.at(1, 0) = ExactScalar(1);
  m.at(1, 1) = ExactScalar(1);
  CHECK(!m.inverse().has_value());
  auto nv = m.null_vector();
  REQUIRE(nv.has_value());
  CHECK((m * *nv).is_zero());
}
