#include <benchmark/benchmark.h>

#include <cstdint>

#include "pairhmm/reference.hpp"
#include "pairhmm/synthetic.hpp"
#include "pairhmm/wavefront.hpp"

namespace {

using namespace pairhmm;

// one read of length m against one haplotype of length n
Batch one_pair(std::size_t m, std::size_t n) {
  return generate_synthetic(1, 1, 1, LengthSpec::fixed(m), LengthSpec::fixed(n), 7).front();
}

void set_cells(benchmark::State& state, std::size_t m, std::size_t n) {
  const auto cells = static_cast<double>(m * n);
  state.counters["GCUPS"] = benchmark::Counter(cells * 1e-9, benchmark::Counter::kIsIterationInvariantRate);
}

void BM_Reference(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const Batch b = one_pair(m, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_reference_linear_space(b.reads()[0], b.haps()[0]));
  }
  set_cells(state, m, n);
}
BENCHMARK(BM_Reference)->Args({64, 128})->Args({256, 256})->Args({1024, 1024});

template <class Real>
void BM_Wavefront(benchmark::State& state) {
  constexpr Precision prec = std::is_same_v<Real, float> ? Precision::Single : Precision::Double;
  const int p = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto cfg = EngineConfig::make(p, k, prec);
  const std::size_t m = cfg.max_read_length();
  const std::size_t n = static_cast<std::size_t>(state.range(2));
  const Batch b = one_pair(m, n);
  const PreparedRead<Real> read(b.reads()[0], cfg);
  WavefrontEngine<Real> engine(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.score(read, b.haps()[0]));
  }
  state.SetLabel(to_string(cfg));
  set_cells(state, m, n);
}

void wavefront_args(benchmark::internal::Benchmark* b) {
  b->Args({2, 12, 100})->Args({4, 20, 150})->Args({8, 12, 150})->Args({16, 4, 150});
  b->Args({16, 16, 256})->Args({32, 8, 256})->Args({32, 32, 1024});
}
BENCHMARK(BM_Wavefront<float>)->Apply(wavefront_args);
BENCHMARK(BM_Wavefront<double>)->Apply(wavefront_args);

}  // namespace
