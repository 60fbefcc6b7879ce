// OpenMP sweep kernel against the serial reference path.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "lnf/fitting.hpp"
#include "lnf/ladder.hpp"

namespace {

lnf::LadderSpec spec_for(int design) {
  return design == 0 ? lnf::preset_design_a() : lnf::preset_design_b();
}

void BM_BuildNetworkParallel(benchmark::State& state) {
  const auto spec = spec_for(static_cast<int>(state.range(1)));
  const auto grid = lnf::FrequencyGrid::linspace(3.5e9, 5.5e9, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lnf::build_network(spec, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_BuildNetworkReference(benchmark::State& state) {
  const auto spec = spec_for(static_cast<int>(state.range(1)));
  const auto grid = lnf::FrequencyGrid::linspace(3.5e9, 5.5e9, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lnf::build_network_reference(spec, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FitDesignA(benchmark::State& state) {
  const auto truth = lnf::design_a();
  const auto grid = lnf::FrequencyGrid::linspace(3.5e9, 5.5e9, 2001);
  const auto obs = lnf::build_network(truth.to_spec(), grid);
  auto start = truth;
  lnf::set_design_parameter(start, "q", 260.0);
  const auto problem = lnf::ladder_fit_problem(obs, start, {"q", "rs", "cp"});
  lnf::FitOptions opt;
  opt.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lnf::fit_model(problem, opt));
}

const std::vector<std::vector<int64_t>> kSweeps{{2001, 20001, 200001}, {0, 1}};

}  // namespace

BENCHMARK(BM_BuildNetworkParallel)->ArgsProduct(kSweeps)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BuildNetworkReference)->ArgsProduct(kSweeps)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FitDesignA)->Arg(0)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
