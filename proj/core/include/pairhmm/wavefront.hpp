#pragma once

// Linear-space forward engine tiled as p cooperating lanes of k read positions.
//
// Lane t owns read positions t*k+1 .. (t+1)*k. The schedule advances over
// haplotype rows: at step s lane t computes row j = s - t (when 1 <= j <= n),
// so n + p steps cover the matrix. Each lane keeps its previous row in local
// state; the values of a lane's rightmost column and the haplotype symbol move
// one lane to the right between steps. Lane 0 is fed the matrix boundary
// (M = I = 0, D = 2^scale / n) at every step.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pairhmm/model.hpp"

namespace pairhmm {

/// Instrumentation filled by the engine on request.
struct WavefrontStats {
  std::uint64_t steps = 0;
  std::uint64_t cells = 0;              // cells computed by active lanes, padding included
  std::uint64_t emission_lookups = 0;
  std::size_t max_lookup_position = 0;  // largest 0-based read position read from the table
  bool lookups_within_table = true;
};

/// Read data staged for one (p, k) tiling: transitions and emission values in
/// lane-interleaved order (slot x * p + t holds read position t * k + x) and
/// padded with neutral values up to p * k.
template <class Real>
class PreparedRead {
 public:
  /// Throws ConfigTooSmall if the read does not fit p * k, plus any error from
  /// building the transitions.
  PreparedRead(const ReadRecord& read, const EngineConfig& cfg);

  std::size_t read_length() const noexcept { return read_length_; }
  int lanes() const noexcept { return p_; }
  int columns() const noexcept { return k_; }
  std::size_t padded_length() const noexcept { return static_cast<std::size_t>(p_) * k_; }

  std::span<const Real> alpha() const noexcept { return alpha_; }
  std::span<const Real> beta() const noexcept { return beta_; }
  std::span<const Real> delta() const noexcept { return delta_; }
  std::span<const Real> epsilon() const noexcept { return epsilon_; }
  std::span<const Real> zeta() const noexcept { return zeta_; }
  /// Emission values, |alphabet| blocks of p * k slots.
  std::span<const Real> emission() const noexcept { return emission_; }

  /// Bytes staged for one read at this tiling.
  static std::size_t footprint_bytes(const EngineConfig& cfg) noexcept;

 private:
  std::size_t read_length_;
  int p_;
  int k_;
  std::vector<Real> alpha_, beta_, delta_, epsilon_, zeta_;
  std::vector<Real> emission_;
};

/// Owns the lane state for one (p, k) tiling; reusable across any number of
/// alignments without further allocation. One instance per thread.
template <class Real>
class WavefrontEngine {
 public:
  explicit WavefrontEngine(const EngineConfig& cfg);

  const EngineConfig& config() const noexcept { return cfg_; }

  /// Throws NumericOverflow when the accumulated sum is zero or not finite.
  Score score(const PreparedRead<Real>& read, const Haplotype& hap, WavefrontStats* stats = nullptr);

 private:
  template <bool kInstrument>
  double run(const PreparedRead<Real>& read, const Haplotype& hap, WavefrontStats* stats);

  EngineConfig cfg_;
  std::size_t row_stride_;
  // previous haplotype row of every lane, one boundary slot plus p lanes per column
  std::vector<Real> row_m_, row_i_, row_d_;
  // per lane: the left neighbour's values from the step before (the diagonal
  // of the first column) and the running diagonal/left values inside a step
  std::vector<Real> seam_m_, seam_i_, seam_d_;
  std::vector<Real> diag_m_, diag_i_, diag_d_;
  std::vector<Real> left_m_, left_i_;
  // haplotype symbol codes, last base first
  std::vector<std::int32_t> hap_reversed_;
};

extern template class PreparedRead<float>;
extern template class PreparedRead<double>;
extern template class WavefrontEngine<float>;
extern template class WavefrontEngine<double>;

/// One alignment on the tiling `cfg`, in cfg.precision.
Score forward_wavefront(const ReadRecord& read, const Haplotype& hap, const EngineConfig& cfg,
                        WavefrontStats* stats = nullptr);

/// Scores every item into `sink` at its global_id. Transitions and emission
/// values are staged once per distinct read. Errors are recorded per item.
void forward_wavefront_batch(std::span<const Batch> batches, std::span<const WorkItem> items, const EngineConfig& cfg,
                             ScoreSink& sink);

}  // namespace pairhmm
