#include "pairhmm/prob.hpp"

#include <array>
#include <cmath>
#include <string>

namespace pairhmm {

namespace {

const std::array<double, kMaxPhred + 1>& phred_table() {
  static const auto table = [] {
    std::array<double, kMaxPhred + 1> t{};
    for (int q = 0; q <= kMaxPhred; ++q) t[q] = std::pow(10.0, -q / 10.0);
    return t;
  }();
  return table;
}

}  // namespace

double phred_to_prob(int q) {
  if (q < 0 || q > kMaxPhred) {
    throw Error(ErrorKind::InvalidQuality, "Phred value " + std::to_string(q) + " outside [0, 93]");
  }
  return phred_table()[q];
}

TransitionProfile build_transitions(const ReadRecord& read) {
  const std::size_t m = read.length();
  TransitionProfile tp;
  tp.alpha.resize(m);
  tp.beta.resize(m);
  tp.delta.resize(m);
  tp.epsilon.resize(m);
  tp.zeta.resize(m);
  const auto& table = phred_table();
  for (std::size_t i = 0; i < m; ++i) {
    const double delta = table[read.ins_qual()[i]];
    const double zeta = table[read.del_qual()[i]];
    const double epsilon = table[read.gcp_qual()[i]];
    if (delta + zeta >= 1.0) {
      throw Error(ErrorKind::DegenerateTransition,
                  "insertion and deletion open probabilities sum to >= 1 at read position " + std::to_string(i + 1));
    }
    tp.delta[i] = delta;
    tp.zeta[i] = zeta;
    tp.epsilon[i] = epsilon;
    tp.alpha[i] = 1.0 - delta - zeta;
    tp.beta[i] = 1.0 - epsilon;
  }
  return tp;
}

EmissionTable::EmissionTable(std::size_t read_length, std::size_t padded_length)
    : read_length_(read_length), padded_length_(padded_length), values_(kAlphabetSize * padded_length, 1.0) {}

bool is_tiling_length(std::size_t n) noexcept {
  for (std::size_t p : {2, 4, 8, 16, 32}) {
    if (n % p == 0) {
      const std::size_t k = n / p;
      if (k >= 4 && k <= 32 && k % 4 == 0) return true;
    }
  }
  return false;
}

EmissionTable build_emission_table(const ReadRecord& read, std::size_t padded_length) {
  const std::size_t m = read.length();
  if (padded_length < m || !is_tiling_length(padded_length)) {
    throw Error(ErrorKind::InvalidConfig, "padded length " + std::to_string(padded_length) +
                                              " is not a lane tiling covering a read of length " + std::to_string(m));
  }
  EmissionTable table(m, padded_length);
  const auto& phred = phred_table();
  for (Base c : kAlphabet) {
    double* row = table.values_.data() + index_of(c) * padded_length;
    for (std::size_t i = 0; i < m; ++i) {
      row[i] = emission_probability(read.bases()[i], c, phred[read.base_qual()[i]]);
    }
  }
  return table;
}

}  // namespace pairhmm
