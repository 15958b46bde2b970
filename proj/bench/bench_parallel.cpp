// Serial reference vs OpenMP run pool on a small grid-world batch.

#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "inqlab/config.hpp"
#include "inqlab/harness.hpp"

namespace {

inqlab::ExperimentConfig bench_config(inqlab::AgentKind agent) {
  inqlab::ExperimentConfig c;
  c.environment.type = inqlab::EnvironmentType::Gridworld;
  c.environment.grid.width = 6;
  c.environment.grid.height = 6;
  c.environment.grid.dispenser = inqlab::Cell{4, 4};
  c.agent.kind = agent;
  c.agent.planner.samples = 100;
  c.agent.planner.horizon = 4;
  c.runs = 8;
  c.steps = 40;
  c.seed = 7;
  return c;
}

void run(benchmark::State& state, inqlab::AgentKind agent, inqlab::Execution execution) {
  const auto config = bench_config(agent);
  const auto setup = inqlab::make_setup(config.environment);
  std::vector<std::size_t> indices(config.runs);
  std::iota(indices.begin(), indices.end(), 0);
  for (auto _ : state) {
    auto results = inqlab::run_batch(config, setup, indices, execution);
    benchmark::DoNotOptimize(results.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * config.runs * config.steps));
}

void BM_InqSerial(benchmark::State& s) { run(s, inqlab::AgentKind::Inq, inqlab::Execution::Serial); }
void BM_InqParallel(benchmark::State& s) { run(s, inqlab::AgentKind::Inq, inqlab::Execution::Parallel); }
void BM_ThompsonSerial(benchmark::State& s) {
  run(s, inqlab::AgentKind::Thompson, inqlab::Execution::Serial);
}
void BM_ThompsonParallel(benchmark::State& s) {
  run(s, inqlab::AgentKind::Thompson, inqlab::Execution::Parallel);
}

}  // namespace

BENCHMARK(BM_InqSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InqParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThompsonSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThompsonParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
