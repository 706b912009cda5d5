// Serial reference vs OpenMP kernels on the workloads the library runs.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "entropyrate/fixtures.hpp"
#include "entropyrate/kernels.hpp"

using namespace entropyrate;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> coefficients(int cutoff) {
  std::vector<cplx> c(kernels::mode_count(2, cutoff));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = {std::sin(0.3 * i), std::cos(0.7 * i)};
  return c;
}

template <auto Synth>
void BM_Synthesize(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const auto c = coefficients(cutoff);
  const kernels::PeriodicGrid grid{2, 4 * (2 * cutoff + 1), 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(Synth(c, cutoff, grid, 1, 0));
}

template <auto Analyze>
void BM_Analyze(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const kernels::PeriodicGrid grid{2, 4 * (2 * cutoff + 1), 1.0, 1.0};
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::cos(0.01 * i);
  for (auto _ : state) benchmark::DoNotOptimize(Analyze(v, grid, cutoff));
}

template <auto Zonal>
void BM_Zonal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> c(n, 0.1);
  std::vector<double> nodes(4 * n);
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = std::cos(3.14159 * (i + 0.5) / nodes.size());
  for (auto _ : state) benchmark::DoNotOptimize(Zonal(c, nodes));
}

template <auto Sweep>
void BM_H3Sweep(benchmark::State& state) {
  const h3::H3Params p{1.0};
  const auto times = fixtures::time_grid(0.1, 100.0, static_cast<int>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(Sweep(p, times));
}

}  // namespace

BENCHMARK(BM_Synthesize<kernels::synthesize_periodic_serial>)->Name("synthesize/serial")->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_Synthesize<kernels::synthesize_periodic_omp>)->Name("synthesize/omp")->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_Analyze<kernels::analyze_periodic_serial>)->Name("analyze/serial")->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_Analyze<kernels::analyze_periodic_omp>)->Name("analyze/omp")->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_Zonal<kernels::synthesize_zonal_serial>)->Name("zonal/serial")->Arg(16)->Arg(64);
BENCHMARK(BM_Zonal<kernels::synthesize_zonal_omp>)->Name("zonal/omp")->Arg(16)->Arg(64);
BENCHMARK(BM_H3Sweep<kernels::h3_sweep_serial>)->Name("h3_sweep/serial")->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_H3Sweep<kernels::h3_sweep_omp>)->Name("h3_sweep/omp")->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
