#include "swfde/simplex.hpp"

#include <catch_amalgamated.hpp>

using namespace swfde;
using Catch::Matchers::WithinAbs;

TEST_CASE("textbook LP optimum") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36.
  Matrix a(3, 2);
  a << 1, 0, 0, 2, 3, 2;
  Vector b(3);
  b << 4, 12, 18;
  Vector c(2);
  c << 3, 5;
  const auto r = maximize(a, b, c);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK_THAT(r.objective, WithinAbs(36.0, 1e-12));
  CHECK_THAT(r.x(0), WithinAbs(2.0, 1e-12));
  CHECK_THAT(r.x(1), WithinAbs(6.0, 1e-12));
}

TEST_CASE("unbounded LP is reported") {
  Matrix a(1, 2);
  a << 1, -1;
  Vector b(1);
  b << 1;
  Vector c(2);
  c << 0, 1;
  CHECK(maximize(a, b, c).status == LpStatus::unbounded);
}

TEST_CASE("degenerate LP terminates under Bland's rule") {
  // Classic cycling example (Beale) in <= form with b = 0 rows.
  Matrix a(3, 4);
  a << 0.25, -60, -1.0 / 25.0, 9, 0.5, -90, -1.0 / 50.0, 3, 0, 0, 1, 0;
  Vector b(3);
  b << 0, 0, 1;
  Vector c(4);
  c << 0.75, -150, 1.0 / 50.0, -6;
  const auto r = maximize(a, b, c);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK_THAT(r.objective, WithinAbs(0.05, 1e-12));
}

TEST_CASE("zero objective returns the origin") {
  Matrix a = Matrix::Identity(2, 2);
  Vector b = Vector::Ones(2);
  const auto r = maximize(a, b, Vector::Zero(2));
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == 0.0);
}
