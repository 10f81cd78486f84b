#include "oracles.hpp"

#include "swfde/errors.hpp"
#include "swfde/linalg.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <vector>

using namespace swfde;
using Catch::Matchers::WithinAbs;

namespace {
Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}
Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("metzler projection keeps diagonal and takes |.| off it") {
  const Matrix m = metzler_projection(mat2(-1, -2, 3, -4)).matrix();
  CHECK(m == mat2(-1, 2, 3, -4));
  CHECK_THROWS_AS(metzler_projection(Matrix(2, 3)), DimensionError);
}

TEST_CASE("MetzlerMatrix validates its input") {
  CHECK_NOTHROW(MetzlerMatrix(mat2(-1, 0, 2, -3)));
  CHECK_THROWS_AS(MetzlerMatrix(mat2(-1, -0.5, 2, -3)), ArgumentError);
  CHECK_THROWS_AS(MetzlerMatrix(Matrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(MetzlerMatrix(Matrix(0, 0)), DimensionError);
  CHECK_THROWS_AS(MetzlerMatrix(mat2(-1, std::nan(""), 0, -1)), ArgumentError);
}

TEST_CASE("PositiveVector rejects zero and negative entries") {
  CHECK_THROWS_AS(PositiveVector(vec2(1, 0)), ArgumentError);
  CHECK_THROWS_AS(PositiveVector(vec2(-1, 2)), ArgumentError);
  const auto p = PositiveVector(vec2(2, 2.5)).normalized();
  CHECK_THAT(p.values()(0), WithinAbs(0.8, 1e-15));
  CHECK(p.values()(1) == 1.0);
}

TEST_CASE("canonical certificate solves M xi = -1") {
  const auto xi = find_positive_vector(MetzlerMatrix(mat2(-3, 2, 2, -2)));
  REQUIRE(xi);
  CHECK_THAT(xi->values()(0), WithinAbs(2.0, 1e-12));
  CHECK_THAT(xi->values()(1), WithinAbs(2.5, 1e-12));
  const auto n = xi->normalized().values();
  CHECK_THAT(n(0), WithinAbs(0.8, 1e-12));
  CHECK_THAT(n(1), WithinAbs(1.0, 1e-12));

  const auto xi2 = find_positive_vector(MetzlerMatrix(mat2(-2, 2, 2, -3)));
  REQUIRE(xi2);
  CHECK_THAT(xi2->normalized().values()(1), WithinAbs(0.8, 1e-12));
}

TEST_CASE("non-Hurwitz and singular Metzler matrices have no certificate") {
  CHECK_FALSE(find_positive_vector(MetzlerMatrix(mat2(1, 0, 0, -1))));
  CHECK_FALSE(find_positive_vector(MetzlerMatrix(mat2(-1, 1, 1, -1))));  // singular
  CHECK_FALSE(find_positive_vector(MetzlerMatrix(mat2(-1, 2, 2, -1))));  // eigenvalue +1
  CHECK(is_hurwitz_metzler(MetzlerMatrix(mat2(-2, 1, 1, -2))));
}

TEST_CASE("1x1 family") {
  Matrix m(1, 1);
  m << -0.5;
  CHECK(is_hurwitz_metzler(MetzlerMatrix(m)));
  m << 0.0;
  CHECK_FALSE(is_hurwitz_metzler(MetzlerMatrix(m)));
}

TEST_CASE("strictness is scale aware") {
  const Matrix m = mat2(-1, 0, 0, -1);
  CHECK(strictly_negative(m, vec2(1, 1)));
  CHECK_FALSE(strictly_negative(mat2(-1, 1, 1, -1), vec2(1, 1)));
  CHECK_FALSE(strictly_negative(mat2(-1, 1, 1, -1), vec2(1, 1 - 1e-12)));
  CHECK(feasibility_threshold(m, vec2(1, 1)) < 0.0);
}

TEST_CASE("Hurwitz test agrees with the eigenvalue oracle on random Metzler matrices") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 5);
  int disagreements = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Matrix m = oracle::random_metzler(rng, dim(rng));
    const bool ours = find_positive_vector(MetzlerMatrix(m)).has_value();
    if (ours != oracle::hurwitz_by_eigenvalues(m)) ++disagreements;
    if (m.rows() == 2 && ours != oracle::hurwitz_2x2(m)) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("common vector: feasible family") {
  // M(P_k) + |B_k| from the sector example; (7, 4) is a known common vector.
  const std::vector<MetzlerMatrix> fam{MetzlerMatrix(mat2(-2, 2, 1, -2)), MetzlerMatrix(mat2(-1, 1, 1, -2))};
  CHECK((fam[0].matrix() * vec2(7, 4)).isApprox(vec2(-6, -1)));
  CHECK((fam[1].matrix() * vec2(7, 4)).isApprox(vec2(-3, -1)));
  const auto res = solve_common_positive_vector(fam);
  REQUIRE(res.vector);
  CHECK(res.margin > 0.0);
  CHECK_FALSE(res.degenerate);
  for (const auto& m : fam) CHECK(strictly_negative(m.matrix(), res.vector->values()));
}

TEST_CASE("common vector: contradictory family is infeasible") {
  const std::vector<MetzlerMatrix> fam{MetzlerMatrix(mat2(-6, 1, 2, -2)), MetzlerMatrix(mat2(-2, 2, 1, -5))};
  CHECK_FALSE(find_common_positive_vector(fam));
  // Each member alone is Hurwitz.
  CHECK(is_hurwitz_metzler(fam[0]));
  CHECK(is_hurwitz_metzler(fam[1]));
}

TEST_CASE("common vector: degenerate margin is classified infeasible") {
  // Both constraints force xi_1 = xi_2 at margin 0.
  const std::vector<MetzlerMatrix> fam{MetzlerMatrix(mat2(-1, 1, 0, -1)), MetzlerMatrix(mat2(-1, 0, 1, -1))};
  const std::vector<MetzlerMatrix> fam2{MetzlerMatrix(mat2(-1, 1, 1, -1))};
  const auto res = solve_common_positive_vector(fam2);
  CHECK_FALSE(res.vector);
  CHECK(res.degenerate);
  const auto res1 = solve_common_positive_vector(fam);
  CHECK_FALSE(res1.vector);
  CHECK(res1.degenerate);
}

TEST_CASE("common vector: single member matches the canonical certificate") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix m = oracle::random_metzler(rng, 1 + trial % 4);
    const std::vector<MetzlerMatrix> fam{MetzlerMatrix(m)};
    CHECK(find_common_positive_vector(fam).has_value() == oracle::hurwitz_by_eigenvalues(m));
  }
}

TEST_CASE("common vector: argument validation") {
  const std::vector<MetzlerMatrix> empty;
  CHECK_THROWS_AS(find_common_positive_vector(empty), ArgumentError);
  Matrix one(1, 1);
  one << -1;
  const std::vector<MetzlerMatrix> mixed{MetzlerMatrix(one), MetzlerMatrix(mat2(-1, 0, 0, -1))};
  CHECK_THROWS_AS(find_common_positive_vector(mixed), DimensionError);
}

TEST_CASE("common vector exists when the family shares a diagonal dominance direction") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = dim(rng);
    // Strictly row diagonally dominant with negative diagonal: xi = 1 works for all.
    std::vector<MetzlerMatrix> fam;
    for (int k = 0; k < 3; ++k) {
      Matrix m = oracle::random_metzler(rng, n, 1.0, 0.0, 0.0);
      for (Eigen::Index i = 0; i < n; ++i) m(i, i) = -(m.row(i).sum() + 0.1);
      fam.emplace_back(m);
    }
    const auto xi = find_common_positive_vector(fam);
    REQUIRE(xi);
    for (const auto& m : fam) CHECK(strictly_negative(m.matrix(), xi->values()));
  }
}

TEST_CASE("projection is idempotent and certificates are scale invariant") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> e(-10.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix a(3, 3);
    for (Eigen::Index i = 0; i < 9; ++i) a(i) = e(rng);
    const Matrix once = metzler_projection(a).matrix();
    CHECK(metzler_projection(once).matrix() == once);
    Matrix shifted = once;
    shifted.diagonal().array() -= 15.0;
    if (const auto xi = find_positive_vector(MetzlerMatrix(shifted))) {
      CHECK((shifted * xi->values()).maxCoeff() < 0.0);
      for (double c : {1e-3, 1.0, 1e3}) CHECK((shifted * (c * xi->values())).maxCoeff() < 0.0);
    }
  }
  Matrix z(1, 1);
  z << 0.0;
  CHECK(metzler_projection(z).matrix() == z);
  CHECK_FALSE(is_hurwitz_metzler(MetzlerMatrix(mat2(-2, 2, 2, -2))));
  Matrix one(1, 1);
  one << -1.0;
  CHECK(find_positive_vector(MetzlerMatrix(one))->values()(0) == 1.0);
}
