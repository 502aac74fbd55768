#include <benchmark/benchmark.h>

#include <random>

#include "offfsp/dataset.hpp"
#include "offfsp/exact_solver.hpp"
#include "offfsp/off_fsp.hpp"
#include "offfsp/offline_rl.hpp"
#include "offfsp/reweight.hpp"

using namespace offfsp;

namespace {

void BM_NashConv(benchmark::State& state, const char* name) {
  const auto game = make_game(name);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nash_conv(*game, StrategyProfile{}).total);
  }
}
BENCHMARK_CAPTURE(BM_NashConv, kuhn, "kuhn");
BENCHMARK_CAPTURE(BM_NashConv, leduc, "leduc");

void BM_GenerateData(benchmark::State& state) {
  const auto game = make_game("kuhn");
  const auto d = sample_dataset(*game, StrategyProfile{}, 5000, 11);
  const auto empirical = empirical_behavior_policy(d);
  const auto proj = project(d, 0);
  const auto target = sequence_form_values(*game, empirical[1], 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        generate_data(d, proj, 0, target, empirical[1]).total_weight());
  }
}
BENCHMARK(BM_GenerateData);

void BM_CqlStep(benchmark::State& state) {
  const auto d = make_rps_d1();
  const auto proj = project(d, 0);
  const WeightedPlayerDataset wd(
      proj, std::vector<double>(proj.num_tuples(), 1.0));
  std::mt19937_64 rng(3);
  QTable q, target;
  const auto batch = wd.resample_batch(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    cql_step(q, target, batch, 1.0, 1e-3, 0.05);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CqlStep)->Arg(256)->Arg(1024);

void BM_OffFspIteration(benchmark::State& state) {
  const auto game = make_game("rps");
  const auto d = make_rps_d1();
  LearnerConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_off_fsp(*game, d, 1, cfg, 1, 5));
  }
}
BENCHMARK(BM_OffFspIteration);

}  // namespace
