#include <benchmark/benchmark.h>

#include "slabcausal/analyticity.hpp"
#include "slabcausal/timedomain.hpp"

using namespace slabcausal;

namespace {

const SlabConfig kSlab{5.0, DielectricModel::lorentz(1.0, 1.0, 2.0, 0.1)};

void BM_EvalEpsilon(benchmark::State& state) {
  Complex z{1.7, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(eval_epsilon(kSlab.model, z));
}
BENCHMARK(BM_EvalEpsilon);

void BM_Transmission(benchmark::State& state) {
  const SlabSolver solver(kSlab);
  for (auto _ : state) benchmark::DoNotOptimize(solver.transmission(Complex{1.9, 0.0}));
}
BENCHMARK(BM_Transmission);

void BM_Spectrum(benchmark::State& state) {
  const auto grid = FrequencyGrid::for_model(kSlab.model);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_spectrum(kSlab, grid));
}
BENCHMARK(BM_Spectrum)->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  PulseSpec p;
  p.carrier = 2.0;
  const Waveform in = synthesize_pulse(p, TimeGrid{-0.025 * static_cast<double>(n), 0.05, n});
  for (auto _ : state) benchmark::DoNotOptimize(propagate(in, kSlab));
}
BENCHMARK(BM_Propagate)->Arg(1 << 13)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_Scan(benchmark::State& state) {
  const auto region = default_scan_region(kSlab.model);
  for (auto _ : state) benchmark::DoNotOptimize(scan_upper_half_plane(kSlab, region, 64));
}
BENCHMARK(BM_Scan)->Unit(benchmark::kMillisecond);

void BM_DispersionRelation(benchmark::State& state) {
  const auto grid = FrequencyGrid::for_model(kSlab.model);
  const auto spec = sample_imag_spectrum(kSlab.model, grid);
  for (auto _ : state) benchmark::DoNotOptimize(kk_reconstruct(spec, Complex{grid.omega(320), 0.0}));
}
BENCHMARK(BM_DispersionRelation);

}  // namespace

BENCHMARK_MAIN();
