// Serial reference against the OpenMP path for the data-parallel kernels.
// Arg 0 runs Exec::serial, arg 1 runs Exec::parallel.

#include <benchmark/benchmark.h>

#include "nmjet/ce_complex.hpp"
#include "nmjet/estimates.hpp"
#include "nmjet/nashmoser.hpp"
#include "nmjet/poisson.hpp"

namespace {

nmjet::Exec exec_of(const benchmark::State& state) {
  return state.range(0) ? nmjet::Exec::parallel : nmjet::Exec::serial;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) ? "parallel x" + std::to_string(nmjet::max_threads()) : "serial");
}

void BM_HomotopyBuild(benchmark::State& state) {
  const auto alg = std::make_shared<const nmjet::LieAlgebra>(nmjet::builtin("so3"));
  const int D = static_cast<int>(state.range(1));
  const auto pi = nmjet::linear_poisson(*alg, D);
  const auto lambda = nmjet::identity_momentum_map(alg, D);
  for (auto _ : state) benchmark::DoNotOptimize(nmjet::HomotopySet::build(lambda, pi, D, exec_of(state)));
  label(state);
}
BENCHMARK(BM_HomotopyBuild)->ArgsProduct({{0, 1}, {6, 8}})->Unit(benchmark::kMillisecond);

void BM_HomotopyBound(benchmark::State& state) {
  const auto p = nmjet::make_problem(std::make_shared<const nmjet::LieAlgebra>(nmjet::builtin("so3")), 6);
  for (auto _ : state) benchmark::DoNotOptimize(nmjet::homotopy_norm_bound(p.hs, 100, 7, exec_of(state)));
  label(state);
}
BENCHMARK(BM_HomotopyBound)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GroupLawSweep(benchmark::State& state) {
  nmjet::SweepOptions o;
  o.trials = 100;
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(nmjet::group_law_sweep(o, 2.0));
  label(state);
}
BENCHMARK(BM_GroupLawSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FlowSweep(benchmark::State& state) {
  const auto alg = std::make_shared<const nmjet::LieAlgebra>(nmjet::builtin("so3"));
  const auto pi = nmjet::linear_poisson(*alg, 6);
  nmjet::SweepOptions o;
  o.trials = 100;
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(nmjet::flow_sweep(o, pi));
  label(state);
}
BENCHMARK(BM_FlowSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
