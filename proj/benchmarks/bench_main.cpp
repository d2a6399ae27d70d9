#include <benchmark/benchmark.h>

#include "axsim/filter.hpp"
#include "axsim/noise.hpp"
#include "axsim/physics.hpp"
#include "axsim/spectral.hpp"

using namespace axsim;

namespace {

TimeGrid grid_of(benchmark::State& state) {
  return TimeGrid{2e-12, static_cast<std::size_t>(state.range(0)), 0.0};
}

void BM_SigmaX(benchmark::State& state) {
  const TimeGrid g = grid_of(state);
  const AxionParams a;
  const QubitConfig q;
  const double scale = 0.5 / modulation_index(effective_signal(a, q));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sigma_x_trace(a, q, g, scale));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SigmaX)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);

void BM_ComposeNoise(benchmark::State& state) {
  const TimeGrid g = grid_of(state);
  NoiseConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compose_noise(g, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComposeNoise)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);

void BM_DesignBandpass(benchmark::State& state) {
  const auto spec = BandpassSpec::around(14e9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(design_bandpass(spec, 5e11));
  }
}
BENCHMARK(BM_DesignBandpass);

void BM_FilterZeroPhase(benchmark::State& state) {
  const TimeGrid g = grid_of(state);
  const auto h = design_bandpass(BandpassSpec::around(14e9), g.sample_rate());
  const Trace x = sigma_x_trace(AxionParams{}, QubitConfig{}, g, 1e19);
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter_zero_phase(x, h));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FilterZeroPhase)->RangeMultiplier(2)->Range(1 << 16, 1 << 18);

void BM_Periodogram(benchmark::State& state) {
  const TimeGrid g = grid_of(state);
  const Trace x = sigma_x_trace(AxionParams{}, QubitConfig{}, g, 1e19);
  for (auto _ : state) {
    benchmark::DoNotOptimize(periodogram(x, Window::hann));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Periodogram)->Arg(90000)->Arg(1 << 17);

void BM_Welch(benchmark::State& state) {
  const TimeGrid g{2e-12, 1 << 18, 0.0};
  const Trace x = sigma_x_trace(AxionParams{}, QubitConfig{}, g, 1e19);
  const PsdOptions opt{Window::hann, static_cast<std::size_t>(state.range(0)), 0.5, false};
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_psd(x, opt));
  }
}
BENCHMARK(BM_Welch)->Arg(1024)->Arg(8192);

void BM_DynamicSnr(benchmark::State& state) {
  const TimeGrid g{2e-12, 90000, 0.0};
  const AxionParams a;
  Trace x = sigma_x_trace(a, QubitConfig{}, g, 1e19);
  const Trace n = compose_noise(g, NoiseConfig{});
  for (std::size_t k = 0; k < x.size(); ++k) x.values[k] += n.values[k];
  auto opt = lower_sideband_bands(14e9, axion_frequency(a));
  opt.hop = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynamic_snr(x, opt));
  }
}
BENCHMARK(BM_DynamicSnr)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
