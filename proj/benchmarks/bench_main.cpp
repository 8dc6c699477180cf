#include <benchmark/benchmark.h>

#include "ncjt/engine.hpp"

using namespace ncjt;

namespace {

CVec random_column(int n, Rng& rng) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.cgaussian();
  return v;
}

void BM_MmseIrcSinr(benchmark::State& state) {
  const int n_rx = 4;
  const int n_interferers = static_cast<int>(state.range(0));
  Rng rng(1);
  const CVec d = random_column(n_rx, rng);
  std::vector<CVec> interferers;
  for (int i = 0; i < n_interferers; ++i) {
    interferers.push_back(random_column(n_rx, rng));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmse_irc_sinr(d, interferers, 1e-3));
  }
}
BENCHMARK(BM_MmseIrcSinr)->Arg(0)->Arg(3)->Arg(7);

void BM_SelectPrecoder(benchmark::State& state) {
  Rng rng(2);
  CMat h(4, 2);
  for (int c = 0; c < 2; ++c) {
    for (int r = 0; r < 4; ++r) h(r, c) = rng.cgaussian();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_precoder(h));
  }
}
BENCHMARK(BM_SelectPrecoder);

void BM_StepTti(benchmark::State& state) {
  RunConfig config;
  config.scheme = static_cast<Scheme>(state.range(0));
  config.ttis = 1 << 20;  // never reached; stepped manually
  Simulation sim(config, 1);
  for (int t = 0; t < 100; ++t) sim.step_tti();  // fill queues and pipelines
  for (auto _ : state) {
    sim.step_tti();
  }
}
BENCHMARK(BM_StepTti)
    ->Arg(static_cast<int>(Scheme::kNone))
    ->Arg(static_cast<int>(Scheme::kDps))
    ->Arg(static_cast<int>(Scheme::kFncjt))
    ->Arg(static_cast<int>(Scheme::kNfncjt))
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
