// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "ergmk/kernels.hpp"
#include "ergmk/rng.hpp"
#include "ergmk/sim.hpp"

using namespace ergmk;

namespace {

ProcessSpec lergm() {
  ProcessSpec p;
  p.family = Family::LERGM;
  p.potential = PotentialSpec({StatisticTerm::edges(), StatisticTerm::triangles(), StatisticTerm::two_stars()},
                              {-1.0, 0.2, -0.05});
  return p;
}

Graph random_graph(int n, double p, std::uint64_t seed) {
  Graph g(n, false);
  Rng rng(seed);
  for (std::size_t k = 0; k < g.num_dyads(); ++k)
    if (rng.uniform() < p) g.flip(k);
  return g;
}

template <bool Parallel>
void BM_ScanRates(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = lergm();
  const Graph g = random_graph(n, 0.1, 1);
  const auto toggles = toggle_table(n, false);
  std::vector<double> out(toggles.size());
  for (auto _ : state) {
    if constexpr (Parallel) kernels::scan_rates(spec, g, toggles, out);
    else kernels::scan_rates_serial(spec, g, toggles, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(toggles.size()));
}

template <bool Parallel>
void BM_AssembleRateMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = lergm();
  const StateSpace space(n, false);
  for (auto _ : state) {
    auto r = Parallel ? kernels::assemble_rate_matrix(spec, space) : kernels::assemble_rate_matrix_serial(spec, space);
    benchmark::DoNotOptimize(r.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(space.size()));
}

template <bool Parallel>
void BM_Ensemble(benchmark::State& state) {
  SimConfig c;
  c.process = lergm();
  c.initial = Graph(8, false);
  c.t_max = 200.0;
  c.max_events = 1u << 30;
  c.record = RecordMode::TimeAverages;
  const int reps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto out = Parallel ? ensemble(c, reps) : ensemble_serial(c, reps);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_ScanRates<false>)->Name("scan_rates/serial")->Arg(40)->Arg(120);
BENCHMARK(BM_ScanRates<true>)->Name("scan_rates/omp")->Arg(40)->Arg(120);
BENCHMARK(BM_AssembleRateMatrix<false>)->Name("assemble/serial")->Arg(5)->Arg(6);
BENCHMARK(BM_AssembleRateMatrix<true>)->Name("assemble/omp")->Arg(5)->Arg(6);
BENCHMARK(BM_Ensemble<false>)->Name("ensemble/serial")->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Ensemble<true>)->Name("ensemble/omp")->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
