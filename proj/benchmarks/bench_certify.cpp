#include "swfde/certify.hpp"
#include "swfde/linalg.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace swfde;

namespace {

Matrix random_metzler(std::mt19937_64& rng, Eigen::Index n, double diag_lo, double diag_hi, double off) {
  std::uniform_real_distribution<double> d(diag_lo, diag_hi);
  std::uniform_real_distribution<double> o(0.0, off);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = i == j ? d(rng) : o(rng);
  }
  return m;
}

std::vector<ModeBounds> family(Eigen::Index n, int modes) {
  std::mt19937_64 rng(1);
  std::vector<ModeBounds> out;
  for (int k = 0; k < modes; ++k) {
    // Strict row dominance keeps every instance certifiable.
    Matrix a = random_metzler(rng, n, 0.0, 0.0, 1.0 / static_cast<double>(n));
    for (Eigen::Index i = 0; i < n; ++i) a(i, i) = -2.0 - a.row(i).sum();
    out.push_back({a, random_metzler(rng, n, 0.0, 0.5, 0.5 / static_cast<double>(n))});
  }
  return out;
}

void BM_PerMode(benchmark::State& state) {
  const auto b = family(state.range(0), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(certify_per_mode(b, 1.0));
}
BENCHMARK(BM_PerMode)->Args({2, 2})->Args({5, 4})->Args({20, 8});

void BM_Common(benchmark::State& state) {
  const auto b = family(state.range(0), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(certify_common(b, 1.0));
}
BENCHMARK(BM_Common)->Args({2, 2})->Args({5, 4})->Args({20, 8});

void BM_PositiveVector(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const MetzlerMatrix m(random_metzler(rng, state.range(0), -8.0, -6.0, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(find_positive_vector(m));
}
BENCHMARK(BM_PositiveVector)->Arg(2)->Arg(5)->Arg(50);

}  // namespace
