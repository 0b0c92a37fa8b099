#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pairhmm/model.hpp"
#include "pairhmm/partition.hpp"

namespace pairhmm {

struct RunOptions {
  std::size_t budget_bytes = kDefaultChunkBudget;
  unsigned workers = 1;
};

struct ConfigBreakdown {
  EngineConfig config;
  std::uint64_t items = 0;
  std::uint64_t cells = 0;
  double seconds = 0.0;  // summed task time on the workers
};

struct ItemError {
  std::uint64_t global_id = 0;
  ErrorKind kind = ErrorKind::NumericOverflow;
};

struct RunReport {
  std::uint64_t total_cells = 0;  // sum of m * n over scored items, true lengths
  double wall_seconds = 0.0;
  double gcups = 0.0;
  std::size_t chunks = 0;
  std::vector<ConfigBreakdown> per_config;  // only configurations that received items
  std::vector<ItemError> errors;            // ascending global_id
  bool partial = false;
};

struct RunResult {
  ScoreSink scores;
  RunReport report;
};

/// Giga cell updates per second. Throws InvalidMeasurement unless wall_seconds > 0.
double throughput(std::uint64_t total_cells, double wall_seconds);

/// Plans, stages and scores every work item of `batches` on `options.workers`
/// threads. Chunks are processed in order; while one chunk computes, the next
/// is staged. Scores land in global_id order regardless of worker count.
/// All configurations must share precision and scale exponent.
RunResult run(std::span<const Batch> batches, std::span<const EngineConfig> configs, const RunOptions& options);

}  // namespace pairhmm
