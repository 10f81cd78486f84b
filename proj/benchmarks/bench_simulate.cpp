#include "swfde/builtins.hpp"
#include "swfde/simulate.hpp"

#include <benchmark/benchmark.h>

using namespace swfde;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

void BM_SimulateBlackBox(benchmark::State& state) {
  const SwitchedSystem sys(2, 1.0,
                           {BlackBoxSubsystem{RightHandSide(&builtins::example1_mode1), std::nullopt, "m1", true},
                            BlackBoxSubsystem{RightHandSide(&builtins::example1_mode2), std::nullopt, "m2", true}});
  const auto phi = *builtins::history("ex1_phi", 2, 1.0);
  const auto sig = periodic_signal(3.0, 2, 30.0);
  const SimulationOptions opt{1e-3, static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(sys, sig, phi, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(opt.horizon / opt.dt));
}
BENCHMARK(BM_SimulateBlackBox)->Arg(5)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_SimulateLinearKernel(benchmark::State& state) {
  DistributedKernel k{1.0 / static_cast<double>(state.range(0)),
                      std::vector<Matrix>(static_cast<std::size_t>(state.range(0)) + 1, Matrix(0.1 * Matrix::Identity(2, 2)))};
  const DelayOperator op(2, 1.0, {{MatrixFunction::constant(mat2(0.2, 0.1, 0.0, 0.2)), LagFunction::constant(0.5)}}, k);
  const SwitchedSystem sys(2, 1.0, {LinearDelaySubsystem{MatrixFunction::constant(mat2(-2, 1, 0.5, -3)), op}});
  const auto phi = *builtins::history("ones", 2, 1.0);
  const SimulationOptions opt{1e-2, 10.0};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(sys, SwitchingSignal(0), phi, opt));
}
BENCHMARK(BM_SimulateLinearKernel)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
