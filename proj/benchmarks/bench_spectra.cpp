#include <benchmark/benchmark.h>

#include "metaview/rng.hpp"
#include "metaview/synth.hpp"
#include "metaview/views.hpp"

using namespace metaview;

namespace {

Graph make_graph(std::int64_t n, std::uint64_t seed) {
  SynthParams params;
  params.n = n;
  params.p = std::min(1.0, 8.0 / static_cast<double>(n));
  params.feature_dim = 8;
  return synth_graph(SynthFamily::erdos_renyi, params, seed);
}

void BM_DiffusionSpectrumClosedForm(benchmark::State& state) {
  Graph g = make_graph(state.range(0), 7);
  ViewConfig cfg;
  cfg.d_z = 128;
  for (auto _ : state)
    benchmark::DoNotOptimize(diffusion_spectrum(g, cfg));
}
BENCHMARK(BM_DiffusionSpectrumClosedForm)->Arg(16)->Arg(64)->Arg(128)->Arg(500);

void BM_DiffusionSpectrumSeries(benchmark::State& state) {
  Graph g = make_graph(state.range(0), 7);
  ViewConfig cfg;
  cfg.d_z = 128;
  cfg.series_truncation = 64;
  for (auto _ : state)
    benchmark::DoNotOptimize(diffusion_spectrum_series_reference(g, cfg));
}
BENCHMARK(BM_DiffusionSpectrumSeries)->Arg(16)->Arg(64)->Arg(128);

void BM_BuildViews(benchmark::State& state) {
  Graph g = make_graph(state.range(0), 11);
  ViewConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(build_views(g, cfg));
}
BENCHMARK(BM_BuildViews)->Arg(16)->Arg(64)->Arg(128);

void BM_HarmonicCentrality(benchmark::State& state) {
  Graph g = make_graph(state.range(0), 13);
  for (auto _ : state)
    benchmark::DoNotOptimize(harmonic_centrality(g));
}
BENCHMARK(BM_HarmonicCentrality)->Arg(64)->Arg(256)->Arg(700);

} // namespace

BENCHMARK_MAIN();
