#include "oracles.hpp"

#include "swfde/certify.hpp"
#include "swfde/errors.hpp"
#include "swfde/io.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace swfde;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::ContainsSubstring;

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

std::vector<ModeBounds> example1_bounds() {
  return {{mat2(-5, 1, 1, -4), mat2(2, 1, 1, 2)}, {mat2(-4, 1, 1, -5), mat2(2, 1, 1, 2)}};
}

std::vector<SectorSubsystem> example2_modes() {
  const Vector beta = vec2(3, 3);
  return {SectorSubsystem{MatrixFunction::constant(mat2(-2, 0, 1, -4)), MatrixFunction::constant(mat2(0, 2, 0, 2)), beta},
          SectorSubsystem{MatrixFunction::constant(mat2(-2, 0, 0, -2)), MatrixFunction::constant(mat2(1, 1, 1, 0)), beta}};
}

bool has_note(const CriterionReport& r, const std::string& needle) {
  for (const auto& n : r.notes) {
    if (n.find(needle) != std::string::npos) return true;
  }
  return false;
}
}  // namespace

TEST_CASE("criterion names round trip") {
  for (auto c : {Criterion::thm1, Criterion::thm2, Criterion::cor1, Criterion::cor3, Criterion::cor5,
                 Criterion::cor6, Criterion::thm4}) {
    CHECK(criterion_from_string(to_string(c)) == c);
  }
  CHECK_FALSE(criterion_from_string("Lemma9"));
}

TEST_CASE("per-mode certificate for the two-mode nonlinear example") {
  const auto bounds = example1_bounds();
  const std::vector<Vector> cand{vec2(0.8, 1.0), vec2(1.0, 0.8)};
  const auto r = certify_per_mode(bounds, 1.0, std::span<const Vector>(cand));
  REQUIRE(r.feasible);
  const auto& c = *r.certificate;
  CHECK(c.theorem == Criterion::thm1);
  CHECK_THAT(c.alpha, WithinAbs(0.1013, 1e-3));
  CHECK(c.gamma == 1.25);
  CHECK_THAT(c.tau_star, WithinAbs(2.2028, 2e-3));
  CHECK_THAT(c.tau_star, WithinAbs(std::log(1.25) / c.alpha, 1e-15));
  for (const auto& res : r.residuals) CHECK((res.array() < 0.0).all());

  // The canonical search finds the same vectors.
  const auto auto_r = certify_per_mode(bounds, 1.0);
  REQUIRE(auto_r.feasible);
  CHECK(auto_r.certificate->theorem == Criterion::cor1);
  CHECK(auto_r.certificate->xi[0].isApprox(vec2(0.8, 1.0)));
  CHECK(auto_r.certificate->xi[1].isApprox(vec2(1.0, 0.8)));
  CHECK(auto_r.certificate->gamma == 1.25);
}

TEST_CASE("alpha_max is a root of the binding inequality") {
  const auto bounds = example1_bounds();
  const std::vector<Vector> xi{vec2(0.8, 1.0), vec2(1.0, 0.8)};
  const double a = compute_alpha_max(bounds, xi, 1.0);
  double worst = -1e300;
  for (std::size_t k = 0; k < 2; ++k) worst = std::max(worst, decay_margin(bounds[k], xi[k], a, 1.0).maxCoeff());
  CHECK(worst < 0.0);
  CHECK(std::abs(worst) < 1e-10 * 10.0);
  double worst_up = -1e300;
  for (std::size_t k = 0; k < 2; ++k) {
    worst_up = std::max(worst_up, decay_margin(bounds[k], xi[k], a * (1.0 + 1e-12), 1.0).maxCoeff());
  }
  CHECK(worst_up >= 0.0);
}

TEST_CASE("alpha_max with h = 0 reduces to the delay-free rate") {
  // g(alpha) = (A + V) xi + alpha xi with A + V = -I gives alpha = 1.
  const std::vector<ModeBounds> b{{Matrix(-Matrix::Identity(2, 2)), Matrix::Zero(2, 2)}};
  const std::vector<Vector> xi{Vector::Ones(2)};
  CHECK_THAT(compute_alpha_max(b, xi, 0.0), WithinAbs(1.0, 1e-14));
}

TEST_CASE("alpha_max rejects infeasible candidates") {
  const auto bounds = example1_bounds();
  const std::vector<Vector> bad{vec2(1.0, 0.1), vec2(1.0, 0.8)};
  CHECK_THROWS_AS(compute_alpha_max(bounds, bad, 1.0), PreconditionError);
}

TEST_CASE("gamma and tau*") {
  const std::vector<Vector> xi{vec2(0.8, 1.0), vec2(1.0, 0.8)};
  CHECK(compute_gamma(xi) == 1.25);
  const std::vector<Vector> same{vec2(2.0, 4.0), vec2(1.0, 2.0)};
  CHECK(compute_gamma(same) == 1.0);
  CHECK(compute_tau_star(1.0, 0.3) == 0.0);
  CHECK_THROWS_AS(compute_tau_star(1.25, 0.0), ArgumentError);
  CHECK_THROWS_AS(compute_tau_star(0.5, 1.0), ArgumentError);
}

TEST_CASE("common certificate does not exist for the nonlinear example") {
  const std::vector<ModeBounds> at_zero{{mat2(-6, 1, 2, -2), Matrix::Zero(2, 2)},
                                        {mat2(-2, 2, 1, -5), Matrix::Zero(2, 2)}};
  const auto r = certify_common(at_zero, 1.0);
  CHECK_FALSE(r.feasible);
  CHECK_FALSE(r.certificate);
  CHECK(has_note(r, "no common xi"));
  CHECK_FALSE(certify_common(example1_bounds(), 1.0).feasible);
}

TEST_CASE("common certificate when one exists") {
  const std::vector<ModeBounds> b{{mat2(-3, 1, 0, -3), mat2(0.5, 0, 0, 0.5)},
                                  {mat2(-3, 0, 1, -3), mat2(0.5, 0, 0, 0.5)}};
  const auto r = certify_common(b, 1.0);
  REQUIRE(r.feasible);
  CHECK(r.certificate->gamma == 1.0);
  CHECK(r.certificate->tau_star == 0.0);
  CHECK(r.certificate->theorem == Criterion::thm2);
  CHECK(r.certificate->xi[0] == r.certificate->xi[1]);
}

TEST_CASE("infeasible per-mode reports name the mode") {
  const std::vector<ModeBounds> b{{mat2(-1, 0, 0, -1), mat2(2, 0, 0, 0)}};
  const auto r = certify_per_mode(b, 1.0);
  CHECK_FALSE(r.feasible);
  CHECK(has_note(r, "mode 1"));
  CHECK_THROWS_AS(certify_per_mode(std::vector<ModeBounds>{}, 1.0), ArgumentError);
  const std::vector<ModeBounds> neg{{mat2(-1, 0, 0, -1), mat2(-1, 0, 0, 0)}};
  CHECK_THROWS_AS(certify_per_mode(neg, 1.0), ArgumentError);
}

TEST_CASE("sector example: comparison table") {
  const auto modes = example2_modes();
  const auto t = compare_criteria(modes);
  CHECK(t.this_criterion);
  CHECK_FALSE(t.dual_max);
  CHECK_FALSE(t.dual_pairs);
  REQUIRE(t.zeta);
  CHECK((mat2(-2, 2, 1, -2) * vec2(7, 4)) == vec2(-6, -1));
  CHECK((mat2(-1, 1, 1, -2) * vec2(7, 4)) == vec2(-3, -1));
}

TEST_CASE("sector example: common certificate, gamma 1") {
  const auto r = certify_sector(example2_modes(), 1.0);
  REQUIRE(r.feasible);
  CHECK(r.certificate->theorem == Criterion::thm4);
  CHECK(r.certificate->gamma == 1.0);
  CHECK(r.certificate->tau_star == 0.0);
  CHECK(r.certificate->alpha > 0.0);
  auto modes = example2_modes();
  modes[1].beta = vec2(3, 2);
  CHECK_THROWS_AS(certify_sector(modes, 1.0), ArgumentError);
}

TEST_CASE("positive linear systems") {
  DelayOperator op(2, 1.0, {DelayTerm{MatrixFunction::constant(mat2(0.5, 0.2, 0.1, 0.5)), LagFunction::constant(1.0)}});
  const SwitchedSystem sys(2, 1.0, {LinearDelaySubsystem{MatrixFunction::constant(mat2(-3, 1, 0.5, -2)), op},
                                    LinearDelaySubsystem{MatrixFunction::constant(mat2(-2, 0.3, 1, -3)), op}});
  const auto r = certify_positive(sys);
  REQUIRE(r.feasible);
  CHECK(r.certificate->theorem == Criterion::cor6);

  // A + eta(0) not Hurwitz: the converse note is reported.
  const SwitchedSystem unstable(2, 1.0, {LinearDelaySubsystem{MatrixFunction::constant(mat2(-0.2, 1, 0.5, -0.2)), op}});
  const auto u = certify_positive(unstable);
  CHECK_FALSE(u.feasible);
  CHECK(has_note(u, "not GES"));

  DelayOperator negop(2, 1.0, {DelayTerm{MatrixFunction::constant(mat2(-0.5, 0, 0, 0)), LagFunction::constant(1.0)}});
  const SwitchedSystem notpos(2, 1.0, {LinearDelaySubsystem{MatrixFunction::constant(mat2(-3, 1, 0.5, -2)), negop}});
  CHECK_THROWS_AS(certify_positive(notpos), UnsupportedError);
}

TEST_CASE("system reports from the bundled specs") {
  const auto ex1 = load_system_spec(SWFDE_DATA_DIR "/ex1.json");
  const auto r1 = certify_system(ex1.system);
  CHECK_FALSE(r1.common.feasible);
  REQUIRE(r1.per_mode.feasible);
  CHECK(r1.per_mode.certificate->theorem == Criterion::cor1);
  CHECK(r1.per_mode.certificate->conditional);
  CHECK(has_note(r1.per_mode, "conditional on declared bounds"));
  CHECK_THAT(r1.per_mode.certificate->tau_star, WithinAbs(2.2028, 2e-3));
  CHECK_THAT(r1.verdict(false), ContainsSubstring("GES over Σ_{τ_a,N_0} for τ_a > τ* = 2.20"));

  const auto ex2 = load_system_spec(SWFDE_DATA_DIR "/ex2.json");
  const auto r2 = certify_system(ex2.system);
  REQUIRE(r2.common.feasible);
  CHECK(r2.common.certificate->theorem == Criterion::thm4);
  CHECK(r2.common.certificate->gamma == 1.0);
  CHECK(r2.verdict(true) == "AES over Σ_+");
  CHECK(&r2.primary() == &r2.common);
}

TEST_CASE("linear delay systems are tagged with the linear criteria") {
  DelayOperator op(2, 1.0, {DelayTerm{MatrixFunction::constant(mat2(0.5, -0.2, 0.1, 0.5)), LagFunction::constant(0.7)}});
  const SwitchedSystem sys(2, 1.0, {LinearDelaySubsystem{MatrixFunction::constant(mat2(-3, -1, 0.5, -2)), op}});
  const auto r = certify_system(sys);
  REQUIRE(r.common.feasible);
  CHECK(r.common.certificate->theorem == Criterion::cor5);
  CHECK(r.per_mode.certificate->theorem == Criterion::cor3);
  CHECK_FALSE(r.common.certificate->conditional);
}

TEST_CASE("alpha root agrees with a grid scan on random instances") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_real_distribution<double> hd(0.1, 3.0);
  int checked = 0;
  while (checked < 40) {
    const Eigen::Index n = dim(rng);
    const Matrix a = oracle::random_metzler(rng, n, 1.0, -6.0, -2.0);
    const Matrix v = oracle::random_metzler(rng, n, 0.5, 0.0, 0.5);
    const std::vector<ModeBounds> b{{a, v}};
    const double h = hd(rng);
    const auto r = certify_per_mode(b, h);
    if (!r.feasible) continue;
    ++checked;
    const Vector& xi = r.certificate->xi[0];
    const double scan = oracle::grid_scan_root([&](double al) { return decay_margin(b[0], xi, al, h).maxCoeff(); });
    CHECK_THAT(r.certificate->alpha, WithinAbs(scan, 1e-5));
  }
}
