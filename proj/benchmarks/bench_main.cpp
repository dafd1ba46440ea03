#include <benchmark/benchmark.h>

#include <vector>

#include "conewave/cone_wave_kernel.hpp"
#include "conewave/diffraction.hpp"
#include "conewave/two_diffraction.hpp"
#include "conewave/wave_trace.hpp"

using namespace conewave;

namespace {

const ConePoint kA{1.0, 0.0}, kB{1.3, 1.0};

void closed_form_mollified(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(sine_kernel_4pi_closed({2.4, kA, kB, 0.05}));
}
BENCHMARK(closed_form_mollified);

void cheeger_series(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(sine_kernel_cheeger_series(3 * pi, {2.4, kA, kB, 0.05}));
}
BENCHMARK(cheeger_series);

void cheeger_sweep(benchmark::State& st) {
  std::vector<double> ts;
  for (int i = 0; i < st.range(0); ++i) ts.push_back(1.5 + 2.0 * i / st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sine_kernel_cheeger_series_sweep(3 * pi, ts, kA, kB, 0.05));
}
BENCHMARK(cheeger_sweep)->Arg(16)->Arg(128);

void friedlander_build(benchmark::State& st) {
  FriedlanderGridSpec spec;
  spec.hy = 4e-3;
  spec.nz = 128;
  for (auto _ : st) benchmark::DoNotOptimize(build_friedlander(3 * pi, spec));
}
BENCHMARK(friedlander_build)->Unit(benchmark::kMillisecond);

void friedlander_query(benchmark::State& st) {
  FriedlanderGridSpec spec;
  spec.hy = 2e-3;
  spec.nz = 256;
  const auto fg = build_friedlander(3 * pi, spec);
  for (auto _ : st) benchmark::DoNotOptimize(sine_kernel_friedlander(fg, {2.4, kA, kB, 0.05}));
}
BENCHMARK(friedlander_query);

void halfwave(benchmark::State& st) {
  const Mollifier m(0.05);
  for (auto _ : st) benchmark::DoNotOptimize(halfwave_mu_4pi(2.2, kA, kB, m));
}
BENCHMARK(halfwave);

void scattering_fourier(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(scattering_matrix_fourier(7.0, 0.4, int(st.range(0)), true));
}
BENCHMARK(scattering_fourier)->Arg(1000)->Arg(200000);

void oracle(benchmark::State& st) {
  ConeChain ch;
  ch.alpha1 = ch.alpha2 = 3 * pi;
  const auto cp = default_composition(ch, double(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(oscillatory_oracle(cp));
}
BENCHMARK(oracle)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void pillowcase_trace(benchmark::State& st) {
  const auto s = pillowcase_spectrum({1, 1}, 400);
  std::vector<double> ts;
  for (int i = 0; i < 100; ++i) ts.push_back(0.5 + 0.075 * i);
  const Mollifier m(0.02);
  for (auto _ : st) benchmark::DoNotOptimize(mollified_trace(s, ts, m));
}
BENCHMARK(pillowcase_trace)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
