#pragma once

#include <cstddef>
#include <vector>

#include "pairhmm/model.hpp"

namespace pairhmm {

/// Full (m+1) x (n+1) forward matrices, row i = read position, column j = haplotype position.
struct DpMatrices {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> match;
  std::vector<double> insertion;
  std::vector<double> deletion;

  double M(std::size_t i, std::size_t j) const { return match[i * cols + j]; }
  double I(std::size_t i, std::size_t j) const { return insertion[i * cols + j]; }
  double D(std::size_t i, std::size_t j) const { return deletion[i * cols + j]; }
};

/// Fills every cell of the forward recurrences in double precision, i-major and
/// j-minor, with emissions evaluated inline per cell.
DpMatrices forward_reference_matrices(const ReadRecord& read, const Haplotype& hap, int scale_log2 = 0);

/// log10 of sum_j (M(m,j) + I(m,j)) with the 2^scale_log2 boundary scale removed.
/// Throws NumericOverflow when the sum is zero or not finite.
Score forward_reference(const ReadRecord& read, const Haplotype& hap, int scale_log2 = 0);

/// Same arithmetic in the same order as forward_reference, keeping two rows.
Score forward_reference_linear_space(const ReadRecord& read, const Haplotype& hap, int scale_log2 = 0);

}  // namespace pairhmm
