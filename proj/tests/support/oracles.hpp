#pragma once

// Test-only helpers: seeded pair generators and oracles that do not share
// code paths with the engines they check.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pairhmm/model.hpp"

namespace pairhmm::testing {

struct Pair {
  ReadRecord read;
  Haplotype hap;
};

struct PairLengths {
  std::size_t min = 1;
  std::size_t max = kMaxReadLength;
};

/// Draws two lengths uniformly from `lengths`; the shorter is the read. The
/// read is a window of the haplotype with substitutions drawn at each base's
/// own error rate, and about 1% N on either side.
Pair random_pair(std::mt19937_64& rng, PairLengths lengths = {});
std::vector<Pair> random_pairs(std::size_t count, std::uint64_t seed, PairLengths lengths = {});

/// Read with constant quality tracks.
ReadRecord make_read(std::string_view bases, Phred base_q, Phred ins_q, Phred del_q, Phred gcp_q);

/// Sums the probability of every alignment path through the pair HMM, written
/// as a generative model: start in a deletion state D(0, j) with weight 1/n,
/// emit through match/insert/delete moves, finish in M or I on the last read
/// base. Long double, exponential time; intended for m, n <= 4.
long double enumerate_paths(const ReadRecord& read, const Haplotype& hap);

/// Smallest p*k >= length, ties to the larger p, found by scanning every pair.
/// Returns configs.size() when nothing fits.
std::size_t brute_force_select(std::size_t length, std::span<const EngineConfig> configs);

}  // namespace pairhmm::testing
