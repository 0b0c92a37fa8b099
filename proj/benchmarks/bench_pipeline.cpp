#include <benchmark/benchmark.h>

#include "pairhmm/pipeline.hpp"
#include "pairhmm/synthetic.hpp"

namespace {

using namespace pairhmm;

// short reads, mixed lengths
void BM_PipelineMixed(benchmark::State& state) {
  const auto batches = generate_synthetic(20, 20, 20, LengthSpec::range(10, 100), LengthSpec::range(50, 150), 3);
  const auto configs = default_configs(Precision::Single);
  RunOptions opts;
  opts.workers = static_cast<unsigned>(state.range(0));
  double gcups = 0;
  for (auto _ : state) {
    const RunResult r = run(batches, configs, opts);
    gcups = r.report.gcups;
    benchmark::DoNotOptimize(r.scores);
  }
  state.counters["GCUPS"] = gcups;
}
BENCHMARK(BM_PipelineMixed)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_PipelineFixed256(benchmark::State& state) {
  const auto batches = generate_synthetic(4, 16, 16, LengthSpec::fixed(256), LengthSpec::fixed(256), 5);
  const auto configs = default_configs(Precision::Single);
  RunOptions opts;
  opts.workers = 1;
  opts.budget_bytes = static_cast<std::size_t>(state.range(0)) << 10;
  double gcups = 0;
  for (auto _ : state) {
    const RunResult r = run(batches, configs, opts);
    gcups = r.report.gcups;
    benchmark::DoNotOptimize(r.scores);
  }
  state.counters["GCUPS"] = gcups;
  state.SetLabel("budget_kib=" + std::to_string(state.range(0)));
}
BENCHMARK(BM_PipelineFixed256)->Arg(256)->Arg(512 * 1024)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
