#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "topotwpa/lattice.hpp"
#include "topotwpa/response.hpp"
#include "topotwpa/sweep.hpp"
#include "topotwpa/topology.hpp"

using namespace topotwpa;

namespace {

EffectiveParams unit_params(int n) {
  EffectiveParams p;
  p.N = n;
  p.J = 1.0;
  p.phi = std::numbers::pi / 2;
  p.Delta = 0.0;
  p.kappa = 2.603;
  p.g_s = 0.6006;
  p.g_c = 0.6006;
  return p;
}

void BM_SingularValues(benchmark::State& state) {
  const auto h = build_hnh(unit_params(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(singular_values(h, -0.5));
}
BENCHMARK(BM_SingularValues)->Arg(8)->Arg(20)->Arg(50);

void BM_SvdSpectrum(benchmark::State& state) {
  const auto h = build_hnh(unit_params(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(svd_spectrum(h, -0.5));
}
BENCHMARK(BM_SvdSpectrum)->Arg(8)->Arg(20)->Arg(50);

void BM_Stability(benchmark::State& state) {
  const auto h = build_hnh(unit_params(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(stability(h));
}
BENCHMARK(BM_Stability)->Arg(8)->Arg(20)->Arg(50);

void BM_Green(benchmark::State& state) {
  const auto h = build_hnh(unit_params(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(green(h, -0.5));
}
BENCHMARK(BM_Green)->Arg(8)->Arg(20)->Arg(50);

void BM_PhaseCell(benchmark::State& state) {
  PhaseGrid grid;
  grid.kappa_over_J = {2.6};
  grid.gc_over_J = {0.6};
  const auto base = unit_params(20);
  for (auto _ : state) benchmark::DoNotOptimize(phase_cell(grid, base, -0.5, 0, 0));
}
BENCHMARK(BM_PhaseCell);

void BM_DisorderRealization(benchmark::State& state) {
  const auto base = unit_params(20);
  const auto sigmas = single_family(DisorderFamily::phi, 0.1);
  const auto grid = default_frequency_grid(1.0);
  const bool w_top = state.range(0) != 0;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_realization(base, sigmas, seed++, 0.0, grid, w_top));
  }
}
BENCHMARK(BM_DisorderRealization)->Arg(0)->Arg(1);

}  // namespace
BENCHMARK_MAIN();
