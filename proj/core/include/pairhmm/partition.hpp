#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pairhmm/model.hpp"

namespace pairhmm {

inline constexpr std::size_t kDefaultChunkBudget = std::size_t{512} << 20;

/// The configuration with the smallest p*k >= read_length; ties go to the larger p.
/// Throws ConfigTooSmall when nothing fits.
const EngineConfig& select_config(std::size_t read_length, std::span<const EngineConfig> configs);

/// A contiguous range [begin, end) of global ids processed together.
struct ChunkRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  std::size_t bytes_estimate = 0;

  std::uint64_t size() const noexcept { return end - begin; }
};

/// Estimated bytes a chunk materialises per distinct read staged on `cfg`:
/// padded bases, four padded quality tracks, emission and transition values.
std::size_t read_footprint(const EngineConfig& cfg) noexcept;
/// Per distinct haplotype.
std::size_t hap_footprint(const Haplotype& hap) noexcept;
/// Per work item (score slot plus its status).
std::size_t score_slot_footprint() noexcept;

struct PartitionPlan {
  std::vector<EngineConfig> configs;
  /// Work items in global_id order (items[id].global_id == id).
  std::vector<WorkItem> items;
  /// Per configuration: ascending global ids of the items it runs.
  std::vector<std::vector<std::uint64_t>> index_lists;
  /// Configuration index of every read, addressed by read_offsets[batch] + read.
  std::vector<std::uint32_t> read_config;
  std::vector<std::size_t> read_offsets;
  std::vector<ChunkRange> chunks;
  std::size_t budget_bytes = 0;

  std::size_t config_index_of(const WorkItem& item) const {
    return read_config[read_offsets[item.batch_index] + item.read_index];
  }
  /// Global ids of configuration `config` falling inside `chunk`.
  std::span<const std::uint64_t> chunk_items(std::size_t config, const ChunkRange& chunk) const;
};

/// Bins every read to its smallest fitting configuration and cuts the id space
/// greedily into chunks whose estimated footprint stays within budget_bytes.
/// Throws ConfigTooSmall for reads longer than every configuration and
/// ChunkBudget if a single item alone exceeds the budget.
PartitionPlan build_plan(std::span<const Batch> batches, std::span<const EngineConfig> configs,
                         std::size_t budget_bytes = kDefaultChunkBudget);

}  // namespace pairhmm
