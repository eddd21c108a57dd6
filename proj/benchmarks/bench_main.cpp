#include <benchmark/benchmark.h>

#include <shellres/resonances.hpp>
#include <shellres/spectral.hpp>

namespace {

const shellres::ShellPotential kShell(1.0, 2.0, 10.0);

void BM_Jost(benchmark::State& state) {
  const shellres::ComplexMomentum k(3.99, -0.26);
  for (auto _ : state) benchmark::DoNotOptimize(shellres::jost(k, kShell));
}
BENCHMARK(BM_Jost);

void BM_FindResonancesQuadrantIV(benchmark::State& state) {
  const auto region = shellres::SearchRegion::make(1e-3, 6.0, -2.0, -1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(shellres::find_resonances(shellres::JostBranch::plus, region, kShell));
  }
}
BENCHMARK(BM_FindResonancesQuadrantIV)->Unit(benchmark::kMillisecond);

void BM_TransformPoint(benchmark::State& state) {
  const std::vector<double> energy = {static_cast<double>(state.range(0))};
  const auto f = shellres::TestFunction::exp_decay(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(shellres::transform(shellres::EigenfunctionKind::sw, f, energy, kShell));
  }
}
BENCHMARK(BM_TransformPoint)->Arg(1)->Arg(36)->Arg(900)->Unit(benchmark::kMicrosecond);

void BM_ContinueSw(benchmark::State& state) {
  const auto f = shellres::TestFunction::smooth_bump(3.0);
  const shellres::ComplexMomentum k(2.5, -0.3);
  for (auto _ : state) benchmark::DoNotOptimize(shellres::continue_transform_sw(f, k, kShell));
}
BENCHMARK(BM_ContinueSw)->Unit(benchmark::kMicrosecond);

void BM_ParsevalBump(benchmark::State& state) {
  const auto f = shellres::TestFunction::smooth_bump(3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(shellres::parseval_check(shellres::EigenfunctionKind::plus, f, kShell));
  }
}
BENCHMARK(BM_ParsevalBump)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
