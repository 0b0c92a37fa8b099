#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pairhmm/model.hpp"

namespace pairhmm {

/// 10^(-q/10). Throws InvalidQuality for q outside [0, 93].
double phred_to_prob(int q);

/// Per read position state-transition probabilities, 0-based (index i-1 holds position i).
///   alpha   match -> match          delta   match -> insertion
///   beta    gap   -> match          epsilon gap   -> same gap
///   zeta    match -> deletion
struct TransitionProfile {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> delta;
  std::vector<double> epsilon;
  std::vector<double> zeta;

  std::size_t size() const noexcept { return alpha.size(); }
};

/// delta/zeta from the insertion/deletion-open tracks, epsilon from gap continuation,
/// alpha = 1 - delta - zeta, beta = 1 - epsilon.
/// Throws DegenerateTransition when delta + zeta >= 1 at any position.
TransitionProfile build_transitions(const ReadRecord& read);

/// Emission probability of read base `r` against haplotype base `h` given the
/// base-call error probability. N on either side counts as a match.
constexpr double emission_probability(Base r, Base h, double error_prob) noexcept {
  if (r == h || r == Base::N || h == Base::N) return 1.0 - error_prob;
  return error_prob / 3.0;
}

/// Emission values for every (haplotype symbol, read position) pair, computed once
/// per read and shared by all haplotypes it is aligned against. Positions past the
/// true read length are padding and hold 1.
class EmissionTable {
 public:
  EmissionTable(std::size_t read_length, std::size_t padded_length);

  std::size_t read_length() const noexcept { return read_length_; }
  std::size_t padded_length() const noexcept { return padded_length_; }

  /// Value for haplotype symbol `c` at 0-based read position `i`.
  double at(Base c, std::size_t i) const { return values_.at(index_of(c) * padded_length_ + i); }
  std::span<const double> row(Base c) const noexcept {
    return std::span<const double>(values_).subspan(index_of(c) * padded_length_, padded_length_);
  }

 private:
  friend EmissionTable build_emission_table(const ReadRecord& read, std::size_t padded_length);

  std::size_t read_length_;
  std::size_t padded_length_;
  std::vector<double> values_;
};

/// True when some supported (p, k) tiling has p * k == n.
bool is_tiling_length(std::size_t n) noexcept;

/// Throws InvalidConfig unless padded_length >= read length and is a tiling length.
EmissionTable build_emission_table(const ReadRecord& read, std::size_t padded_length);

}  // namespace pairhmm
