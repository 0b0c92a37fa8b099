#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pairhmm/model.hpp"

namespace pairhmm {

/// Either a fixed length (min == max) or a uniform range [min, max].
struct LengthSpec {
  std::size_t min = 1;
  std::size_t max = 1;

  static LengthSpec fixed(std::size_t n) noexcept { return {n, n}; }
  static LengthSpec range(std::size_t lo, std::size_t hi) noexcept { return {lo, hi}; }
};

struct QualityProfile {
  Phred base_min = 10;
  Phred base_max = 40;
  Phred gap_open_min = 30;  // insertion and deletion open
  Phred gap_open_max = 45;
  Phred gap_continuation = 10;
};

struct SyntheticSpec {
  std::size_t num_batches = 1;
  std::size_t reads_per_batch = 1;
  std::size_t haps_per_batch = 1;
  LengthSpec read_length = LengthSpec::fixed(100);
  LengthSpec hap_length = LengthSpec::fixed(150);
  std::uint64_t seed = 1;
  QualityProfile quality{};
};

/// Deterministic for a given spec. Each batch models one genomic region: the
/// first haplotype is uniform over A/C/G/T, the others are copies carrying ~1%
/// substitutions. Reads are windows of a random haplotype (random bases past its
/// end) with base-call errors drawn at each position's own error probability,
/// so every base stays marginally uniform over A/C/G/T.
/// Throws InvalidSpec for zero counts, empty or inverted ranges, reads longer
/// than 1024, or inconsistent quality ranges.
std::vector<Batch> generate_synthetic(const SyntheticSpec& spec);

std::vector<Batch> generate_synthetic(std::size_t num_batches, std::size_t reads_per_batch,
                                      std::size_t haps_per_batch, LengthSpec read_length, LengthSpec hap_length,
                                      std::uint64_t seed);

}  // namespace pairhmm
