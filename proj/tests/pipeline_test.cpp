#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "pairhmm/pipeline.hpp"
#include "pairhmm/reference.hpp"
#include "pairhmm/synthetic.hpp"
#include "pairhmm/worker_pool.hpp"
#include "support/oracles.hpp"

namespace pairhmm {
namespace {

TEST(Throughput, CellsPerNanosecond) {
  EXPECT_DOUBLE_EQ(throughput(1'000'000'000, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(throughput(0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(throughput(3'000'000'000, 2.0), 1.5);
  for (double bad : {0.0, -1.0}) {
    try {
      throughput(10, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidMeasurement);
    }
  }
}

TEST(WorkerPool, RunsEveryTaskOnce) {
  for (unsigned workers : {1u, 3u, 8u}) {
    WorkerPool pool(workers);
    EXPECT_EQ(pool.size(), workers);
    for (std::size_t round = 0; round < 3; ++round) {
      std::vector<std::atomic<int>> hits(257);
      pool.parallel_for(hits.size(), [&](std::size_t i, unsigned w) {
        ASSERT_LT(w, workers);
        hits[i].fetch_add(1);
      });
      for (auto& h : hits) ASSERT_EQ(h.load(), 1);
    }
    pool.parallel_for(0, [](std::size_t, unsigned) { FAIL(); });
  }
}

TEST(WorkerPool, RethrowsTaskFailure) {
  WorkerPool pool(4);
  EXPECT_THROW(pool.parallel_for(100,
                                 [](std::size_t i, unsigned) {
                                   if (i == 37) throw std::runtime_error("task 37");
                                 }),
               std::runtime_error);
  // still usable
  std::atomic<int> n{0};
  pool.parallel_for(10, [&](std::size_t, unsigned) { ++n; });
  EXPECT_EQ(n.load(), 10);
}

std::vector<Batch> three_batches() {
  SyntheticSpec spec;
  spec.num_batches = 3;
  spec.reads_per_batch = 3;
  spec.haps_per_batch = 2;
  spec.read_length = LengthSpec::range(10, 151);
  spec.hap_length = LengthSpec::range(151, 300);
  spec.seed = 77;
  return generate_synthetic(spec);
}

TEST(Pipeline, ScoresEveryItemLikeTheReference) {
  const auto batches = three_batches();
  const auto configs = default_configs(Precision::Double);
  const auto result = run(batches, configs, RunOptions{});
  const auto items = enumerate_work_items(batches);
  ASSERT_EQ(result.scores.size(), items.size());
  std::uint64_t cells = 0;
  for (const auto& it : items) {
    const auto& b = batches[it.batch_index];
    const auto& read = b.reads()[it.read_index];
    const auto& hap = b.haps()[it.hap_index];
    ASSERT_EQ(result.scores.score(it.global_id).log10_likelihood, forward_reference(read, hap).log10_likelihood);
    cells += read.length() * hap.length();
  }
  EXPECT_EQ(result.report.total_cells, cells);
  EXPECT_TRUE(result.report.errors.empty());
  EXPECT_FALSE(result.report.partial);
  EXPECT_EQ(result.report.gcups, throughput(result.report.total_cells, result.report.wall_seconds));
  std::uint64_t per_config_items = 0;
  for (const auto& pc : result.report.per_config) per_config_items += pc.items;
  EXPECT_EQ(per_config_items, items.size());
}

TEST(Pipeline, WorkersAndBudgetDoNotChangeScores) {
  const auto batches = three_batches();
  const auto configs = default_configs(Precision::Single);
  const auto base = run(batches, configs, RunOptions{kDefaultChunkBudget, 1});
  for (unsigned workers : {2u, 8u}) {
    for (std::size_t budget : {std::size_t{8} << 10, kDefaultChunkBudget}) {
      const auto other = run(batches, configs, RunOptions{budget, workers});
      ASSERT_EQ(other.scores.size(), base.scores.size());
      for (std::size_t id = 0; id < base.scores.size(); ++id) {
        ASSERT_EQ(other.scores.score(id).log10_likelihood, base.scores.score(id).log10_likelihood);
      }
      EXPECT_EQ(other.report.total_cells, base.report.total_cells);
      if (budget < kDefaultChunkBudget) EXPECT_GT(other.report.chunks, 1u);
    }
  }
}

TEST(Pipeline, FailedItemsAreReportedNotFatal) {
  std::vector<ReadRecord> reads;
  reads.push_back(testing::make_read("ACGTACGT", 30, 40, 40, 10));
  reads.push_back(testing::make_read(std::string(1000, 'A'), 40, 45, 45, 60));  // underflows
  std::vector<Haplotype> haps;
  haps.emplace_back(parse_sequence("C"));
  std::vector<Batch> batches;
  batches.emplace_back(std::move(reads), std::move(haps));
  const auto result = run(batches, default_configs(Precision::Single), RunOptions{kDefaultChunkBudget, 2});
  EXPECT_TRUE(result.scores.has_score(0));
  ASSERT_EQ(result.report.errors.size(), 1u);
  EXPECT_EQ(result.report.errors[0].global_id, 1u);
  EXPECT_EQ(result.report.errors[0].kind, ErrorKind::NumericOverflow);
  // only scored items count towards throughput
  EXPECT_EQ(result.report.total_cells, 8u);
}

TEST(Pipeline, MixedPrecisionIsRejected) {
  const auto batches = three_batches();
  std::vector<EngineConfig> configs{EngineConfig::make(32, 32, Precision::Single),
                                    EngineConfig::make(16, 16, Precision::Double)};
  EXPECT_THROW(run(batches, configs, RunOptions{}), Error);
}

TEST(Pipeline, EmptyInput) {
  const auto result = run({}, default_configs(), RunOptions{});
  EXPECT_EQ(result.scores.size(), 0u);
  EXPECT_EQ(result.report.total_cells, 0u);
  EXPECT_EQ(result.report.gcups, 0.0);
}

}  // namespace
}  // namespace pairhmm
