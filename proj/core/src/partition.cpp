#include "pairhmm/partition.hpp"

#include <algorithm>
#include <string>

namespace pairhmm {

const EngineConfig& select_config(std::size_t read_length, std::span<const EngineConfig> configs) {
  const EngineConfig* best = nullptr;
  for (const auto& cfg : configs) {
    const std::size_t cap = cfg.max_read_length();
    if (cap < read_length) continue;
    if (best == nullptr || cap < best->max_read_length() || (cap == best->max_read_length() && cfg.p > best->p)) {
      best = &cfg;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorKind::ConfigTooSmall,
                "no configuration holds a read of length " + std::to_string(read_length));
  }
  return *best;
}

std::size_t read_footprint(const EngineConfig& cfg) noexcept {
  const std::size_t padded = cfg.max_read_length();
  const std::size_t real = cfg.precision == Precision::Single ? sizeof(float) : sizeof(double);
  return padded + 4 * padded + (kAlphabetSize + 5) * padded * real;
}

std::size_t hap_footprint(const Haplotype& hap) noexcept { return hap.length(); }

std::size_t score_slot_footprint() noexcept { return sizeof(double) + 1; }

std::span<const std::uint64_t> PartitionPlan::chunk_items(std::size_t config, const ChunkRange& chunk) const {
  const auto& list = index_lists.at(config);
  const auto first = std::lower_bound(list.begin(), list.end(), chunk.begin);
  const auto last = std::lower_bound(first, list.end(), chunk.end);
  return {list.data() + (first - list.begin()), static_cast<std::size_t>(last - first)};
}

PartitionPlan build_plan(std::span<const Batch> batches, std::span<const EngineConfig> configs,
                         std::size_t budget_bytes) {
  if (configs.empty()) throw Error(ErrorKind::InvalidConfig, "no engine configurations registered");
  for (const auto& cfg : configs) cfg.validate();

  PartitionPlan plan;
  plan.configs.assign(configs.begin(), configs.end());
  plan.index_lists.resize(configs.size());
  plan.budget_bytes = budget_bytes;
  plan.items = enumerate_work_items(batches);

  plan.read_offsets.reserve(batches.size());
  for (std::size_t b = 0; b < batches.size(); ++b) {
    plan.read_offsets.push_back(plan.read_config.size());
    const auto& reads = batches[b].reads();
    for (std::size_t r = 0; r < reads.size(); ++r) {
      try {
        const EngineConfig& chosen = select_config(reads[r].length(), plan.configs);
        plan.read_config.push_back(static_cast<std::uint32_t>(&chosen - plan.configs.data()));
      } catch (const Error&) {
        throw Error(ErrorKind::ConfigTooSmall, "batch " + std::to_string(b) + " read " + std::to_string(r) +
                                                   " has length " + std::to_string(reads[r].length()) +
                                                   ", longer than every registered configuration");
      }
    }
  }

  for (const auto& item : plan.items) plan.index_lists[plan.config_index_of(item)].push_back(item.global_id);

  // Greedy chunking in id order. A read or haplotype is charged once per chunk.
  std::vector<std::vector<std::uint64_t>> hap_seen(batches.size());
  for (std::size_t b = 0; b < batches.size(); ++b) hap_seen[b].assign(batches[b].haps().size(), 0);
  std::uint64_t chunk_tag = 1;
  ChunkRange current;
  bool open = false;

  auto item_cost = [&](const WorkItem& item, bool first_in_chunk) {
    std::size_t bytes = score_slot_footprint();
    if (first_in_chunk || item.hap_index == 0) bytes += read_footprint(plan.configs[plan.config_index_of(item)]);
    if (hap_seen[item.batch_index][item.hap_index] != chunk_tag) {
      bytes += hap_footprint(batches[item.batch_index].haps()[item.hap_index]);
    }
    return bytes;
  };

  for (const auto& item : plan.items) {
    std::size_t cost = item_cost(item, !open);
    if (open && current.bytes_estimate + cost > budget_bytes) {
      plan.chunks.push_back(current);
      ++chunk_tag;
      open = false;
      cost = item_cost(item, true);
    }
    if (!open) {
      if (cost > budget_bytes) {
        throw Error(ErrorKind::ChunkBudget, "work item " + std::to_string(item.global_id) + " needs " +
                                                std::to_string(cost) + " bytes, more than the chunk budget of " +
                                                std::to_string(budget_bytes));
      }
      current = ChunkRange{item.global_id, item.global_id, 0};
      open = true;
    }
    hap_seen[item.batch_index][item.hap_index] = chunk_tag;
    current.end = item.global_id + 1;
    current.bytes_estimate += cost;
  }
  if (open) plan.chunks.push_back(current);
  return plan;
}

}  // namespace pairhmm
