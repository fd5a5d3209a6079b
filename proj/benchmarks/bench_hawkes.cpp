#include <benchmark/benchmark.h>

#include "test_support.hpp"
#include "urlspread/hawkes_fit.hpp"
#include "urlspread/hawkes_sim.hpp"

using namespace urlspread;

namespace {

Cascade synthetic_cascade(std::size_t target_events) {
  HawkesModel model{{"A", "B", "C"},
                    {0.3, 0.2, 0.1},
                    {{0.2, 0.2, 0.0}, {0.0, 0.2, 0.2}, {0.2, 0.0, 0.0}},
                    1.0};
  SimSpec spec;
  spec.model = model;
  // Stationary total rate is ~1.1/hour; size the window to the target count.
  const double horizon = static_cast<double>(target_events) / 1.1;
  for (const auto& community : model.communities)
    spec.windows[community] = {0.0, horizon};
  spec.seed = 7;
  return simulate(spec).cascade;
}

void BM_EventIntensities(benchmark::State& state) {
  const Cascade cascade = synthetic_cascade(static_cast<std::size_t>(state.range(0)));
  HawkesModel model{{"A", "B", "C"},
                    {0.3, 0.2, 0.1},
                    {{0.2, 0.2, 0.0}, {0.0, 0.2, 0.2}, {0.2, 0.0, 0.0}},
                    1.0};
  const IndexedCascade indexed = IndexedCascade::make(model, cascade);
  for (auto _ : state) {
    auto lambdas = event_intensities(model, indexed);
    benchmark::DoNotOptimize(lambdas);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EventIntensities)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_EventIntensitiesNaive(benchmark::State& state) {
  const Cascade cascade = synthetic_cascade(static_cast<std::size_t>(state.range(0)));
  HawkesModel model{{"A", "B", "C"},
                    {0.3, 0.2, 0.1},
                    {{0.2, 0.2, 0.0}, {0.0, 0.2, 0.2}, {0.2, 0.0, 0.0}},
                    1.0};
  const IndexedCascade indexed = IndexedCascade::make(model, cascade);
  for (auto _ : state) {
    auto lambdas = event_intensities_naive(model, indexed);
    benchmark::DoNotOptimize(lambdas);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EventIntensitiesNaive)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_EmStep(benchmark::State& state) {
  const Cascade cascade = synthetic_cascade(static_cast<std::size_t>(state.range(0)));
  HawkesModel model = background_only_model(cascade);
  for (auto& m : model.mu) m *= 0.5;
  for (auto& row : model.w) std::fill(row.begin(), row.end(), 0.1);
  for (auto _ : state) {
    auto step = em_step(model, cascade);
    benchmark::DoNotOptimize(step);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EmStep)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_Fit(benchmark::State& state) {
  const Cascade cascade = synthetic_cascade(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto fitted = fit(cascade);
    benchmark::DoNotOptimize(fitted);
  }
}
BENCHMARK(BM_Fit)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  HawkesModel model{{"A"}, {1.0}, {{0.5}}, 1.0};
  SimSpec spec;
  spec.model = model;
  spec.windows = {{"A", {0.0, static_cast<double>(state.range(0))}}};
  spec.seed = 11;
  for (auto _ : state) {
    auto result = simulate(spec);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_Simulate)->RangeMultiplier(8)->Range(128, 8192);

}  // namespace

BENCHMARK_MAIN();
