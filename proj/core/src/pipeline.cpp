#include "pairhmm/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <memory>
#include <mutex>
#include <optional>

#include "pairhmm/wavefront.hpp"
#include "pairhmm/worker_pool.hpp"

namespace pairhmm {

double throughput(std::uint64_t total_cells, double wall_seconds) {
  if (!(wall_seconds > 0.0)) throw Error(ErrorKind::InvalidMeasurement, "elapsed time must be positive");
  return static_cast<double>(total_cells) / (wall_seconds * 1e9);
}

namespace {

using Clock = std::chrono::steady_clock;

/// Reads of one chunk staged for their configurations. Reads of a chunk are a
/// contiguous run of read ordinals starting at first_read.
template <class Real>
struct StagedChunk {
  ChunkRange range;
  std::size_t first_read = 0;
  std::vector<std::optional<PreparedRead<Real>>> reads;
  std::vector<ErrorKind> read_errors;
};

template <class Real>
StagedChunk<Real> stage_chunk(std::span<const Batch> batches, const PartitionPlan& plan, const ChunkRange& range) {
  StagedChunk<Real> staged;
  staged.range = range;
  const WorkItem& first = plan.items[range.begin];
  const WorkItem& last = plan.items[range.end - 1];
  staged.first_read = plan.read_offsets[first.batch_index] + first.read_index;
  const std::size_t last_read = plan.read_offsets[last.batch_index] + last.read_index;
  const std::size_t count = last_read - staged.first_read + 1;
  staged.reads.resize(count);
  staged.read_errors.resize(count, ErrorKind::Io);

  std::size_t ordinal = staged.first_read;
  std::uint32_t batch = first.batch_index;
  std::uint32_t read = first.read_index;
  for (std::size_t i = 0; i < count; ++i, ++ordinal) {
    while (read >= batches[batch].reads().size()) {
      ++batch;
      read = 0;
    }
    try {
      staged.reads[i].emplace(batches[batch].reads()[read], plan.configs[plan.read_config[ordinal]]);
    } catch (const Error& e) {
      staged.read_errors[i] = e.kind();
    }
    ++read;
  }
  return staged;
}

struct TaskSpan {
  std::size_t config = 0;
  std::span<const std::uint64_t> ids;
};

struct TaskTally {
  std::uint64_t items = 0;
  std::uint64_t cells = 0;
  double seconds = 0.0;
};

template <class Real>
RunResult run_impl(std::span<const Batch> batches, std::span<const EngineConfig> configs, const RunOptions& options) {
  const auto started = Clock::now();
  PartitionPlan plan = build_plan(batches, configs, options.budget_bytes);

  RunResult result{ScoreSink(plan.items.size()), RunReport{}};
  RunReport& report = result.report;
  report.chunks = plan.chunks.size();
  std::vector<TaskTally> per_config(plan.configs.size());

  WorkerPool pool(options.workers);
  // engines[worker][config], created on first use by that worker
  std::vector<std::vector<std::unique_ptr<WavefrontEngine<Real>>>> engines(options.workers);
  for (auto& row : engines) row.resize(plan.configs.size());

  const bool overlap = options.workers >= 2;
  auto stage = [&](std::size_t c) { return stage_chunk<Real>(batches, plan, plan.chunks[c]); };

  std::future<StagedChunk<Real>> pending;
  if (!plan.chunks.empty()) {
    pending = std::async(overlap ? std::launch::async : std::launch::deferred, stage, 0);
  }

  for (std::size_t c = 0; c < plan.chunks.size(); ++c) {
    StagedChunk<Real> chunk;
    try {
      chunk = pending.get();
    } catch (...) {
      report.partial = true;
      throw;
    }
    if (c + 1 < plan.chunks.size()) {
      pending = std::async(overlap ? std::launch::async : std::launch::deferred, stage, c + 1);
    }

    // Split every configuration's share of the chunk into tasks; all of them
    // run on the same pool concurrently.
    std::vector<TaskSpan> tasks;
    const std::size_t target_tasks = static_cast<std::size_t>(options.workers) * 4;
    for (std::size_t cfg = 0; cfg < plan.configs.size(); ++cfg) {
      const auto ids = plan.chunk_items(cfg, chunk.range);
      if (ids.empty()) continue;
      const std::size_t grain = std::max<std::size_t>(1, (ids.size() + target_tasks - 1) / target_tasks);
      for (std::size_t pos = 0; pos < ids.size(); pos += grain) {
        tasks.push_back(TaskSpan{cfg, ids.subspan(pos, std::min(grain, ids.size() - pos))});
      }
    }
    std::vector<TaskTally> tallies(tasks.size());

    pool.parallel_for(tasks.size(), [&](std::size_t index, unsigned worker) {
      const TaskSpan& task = tasks[index];
      auto& engine = engines[worker][task.config];
      if (!engine) engine = std::make_unique<WavefrontEngine<Real>>(plan.configs[task.config]);
      TaskTally& tally = tallies[index];
      const auto t0 = Clock::now();
      for (std::uint64_t id : task.ids) {
        const WorkItem& item = plan.items[id];
        const std::size_t local = plan.read_offsets[item.batch_index] + item.read_index - chunk.first_read;
        const auto& prepared = chunk.reads[local];
        if (!prepared) {
          result.scores.fail(id, chunk.read_errors[local]);
          continue;
        }
        const Haplotype& hap = batches[item.batch_index].haps()[item.hap_index];
        try {
          result.scores.set(id, engine->score(*prepared, hap));
          ++tally.items;
          tally.cells += static_cast<std::uint64_t>(prepared->read_length()) * hap.length();
        } catch (const Error& e) {
          result.scores.fail(id, e.kind());
        }
      }
      tally.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    });

    for (std::size_t i = 0; i < tasks.size(); ++i) {
      auto& agg = per_config[tasks[i].config];
      agg.items += tallies[i].items;
      agg.cells += tallies[i].cells;
      agg.seconds += tallies[i].seconds;
    }
  }

  for (std::size_t cfg = 0; cfg < plan.configs.size(); ++cfg) {
    if (plan.index_lists[cfg].empty()) continue;
    report.per_config.push_back(
        ConfigBreakdown{plan.configs[cfg], per_config[cfg].items, per_config[cfg].cells, per_config[cfg].seconds});
    report.total_cells += per_config[cfg].cells;
  }
  for (std::uint64_t id = 0; id < plan.items.size(); ++id) {
    if (auto kind = result.scores.error(id)) report.errors.push_back(ItemError{id, *kind});
  }

  const double elapsed = std::chrono::duration<double>(Clock::now() - started).count();
  report.wall_seconds = std::max(elapsed, 1e-9);
  report.gcups = throughput(report.total_cells, report.wall_seconds);
  return result;
}

}  // namespace

RunResult run(std::span<const Batch> batches, std::span<const EngineConfig> configs, const RunOptions& options) {
  if (options.workers == 0) throw Error(ErrorKind::InvalidConfig, "at least one worker is required");
  if (configs.empty()) throw Error(ErrorKind::InvalidConfig, "no engine configurations registered");
  for (const auto& cfg : configs) {
    if (cfg.precision != configs.front().precision || cfg.scale_log2 != configs.front().scale_log2) {
      throw Error(ErrorKind::InvalidConfig, "all configurations of a run must share precision and scale");
    }
  }
  if (configs.front().precision == Precision::Single) return run_impl<float>(batches, configs, options);
  return run_impl<double>(batches, configs, options);
}

}  // namespace pairhmm
