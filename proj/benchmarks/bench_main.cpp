#include <benchmark/benchmark.h>

#include <vector>

#include "dscfq/analysis.hpp"
#include "dscfq/engine.hpp"
#include "dscfq/metrics.hpp"
#include "dscfq/trace.hpp"

using namespace dscfq;

namespace {

engine::Scenario scenario_seconds(double alpha, std::int64_t seconds) {
  auto sc = engine::default_scenario();
  sc.alpha_policy = engine::FixedAlpha{alpha};
  sc.duration = seconds * 1'000'000'000;
  return sc;
}

const engine::Trace& reference_trace() {
  static const engine::Trace trace =
      engine::run_simulation(scenario_seconds(0.04, 5));
  return trace;
}

void BM_RunSimulation(benchmark::State& state) {
  auto sc = scenario_seconds(0.04, state.range(0));
  for (auto _ : state) {
    auto trace = engine::run_simulation(sc);
    benchmark::DoNotOptimize(trace.end_tick);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunSimulation)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

// collision-heavy vs idle-heavy regimes of the same scenario
void BM_RunSimulationAlpha(benchmark::State& state) {
  auto sc = scenario_seconds(state.range(0) / 1000.0, 2);
  for (auto _ : state) {
    auto trace = engine::run_simulation(sc);
    benchmark::DoNotOptimize(trace.end_tick);
  }
}
BENCHMARK(BM_RunSimulationAlpha)->Arg(5)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_CollisionPhase(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  engine::TimingParams timing;
  for (auto _ : state) {
    state.PauseTiming();
    std::vector<sched::AgentSchedState> states(n);
    std::vector<core::SplitMix64> rngs;
    rngs.reserve(n);
    std::vector<engine::CollisionContender> contenders;
    contenders.reserve(n);
    for (int i = 0; i < n; ++i)
      rngs.push_back(core::substream(1, i, core::StreamKind::SplitPulse));
    for (int i = 0; i < n; ++i)
      contenders.push_back({i, 2016, 1, &states[i], &rngs[i]});
    state.ResumeTiming();
    auto result =
        engine::collision_phase(contenders, timing, 2, 0, 0, 0.0, nullptr, {});
    benchmark::DoNotOptimize(result.slot.duration);
  }
}
BENCHMARK(BM_CollisionPhase)->Arg(2)->Arg(8)->Arg(32);

void BM_ValidateTrace(benchmark::State& state) {
  const auto& trace = reference_trace();
  for (auto _ : state) {
    auto report = metrics::validate_trace(trace);
    benchmark::DoNotOptimize(report.pairwise_samples);
  }
}
BENCHMARK(BM_ValidateTrace)->Unit(benchmark::kMillisecond);

void BM_SlidingWindowFairness(benchmark::State& state) {
  const auto& trace = reference_trace();
  const std::int64_t window = state.range(0);
  for (auto _ : state) {
    auto series = metrics::sliding_window_fairness(trace, window);
    benchmark::DoNotOptimize(series.mean);
  }
}
BENCHMARK(BM_SlidingWindowFairness)->Arg(100)->Arg(1000)
    ->Unit(benchmark::kMillisecond);

void BM_TraceCsv(benchmark::State& state) {
  const auto& trace = reference_trace();
  for (auto _ : state) {
    auto csv = engine::trace_csv_string(trace);
    benchmark::DoNotOptimize(csv.size());
  }
  state.SetBytesProcessed(
      state.iterations() *
      static_cast<std::int64_t>(engine::trace_csv_string(trace).size()));
}
BENCHMARK(BM_TraceCsv)->Unit(benchmark::kMillisecond);

void BM_OptimalAttemptRate(benchmark::State& state) {
  auto model = analysis::model_from_timing(engine::TimingParams{}, 16128.0, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(analysis::optimal_attempt_rate(model));
  }
}
BENCHMARK(BM_OptimalAttemptRate);

}  // namespace

BENCHMARK_MAIN();
