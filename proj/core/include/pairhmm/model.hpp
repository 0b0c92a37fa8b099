#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pairhmm/error.hpp"

namespace pairhmm {

enum class Base : std::uint8_t { A = 0, C = 1, G = 2, T = 3, N = 4 };

inline constexpr std::size_t kAlphabetSize = 5;
inline constexpr std::array<Base, kAlphabetSize> kAlphabet{Base::A, Base::C, Base::G, Base::T, Base::N};

using Phred = std::uint8_t;
inline constexpr Phred kMaxPhred = 93;

/// Longest read any supported lane configuration can hold (32 lanes x 32 columns).
inline constexpr std::size_t kMaxReadLength = 1024;

std::optional<Base> base_from_char(char c) noexcept;
char to_char(Base b) noexcept;
constexpr std::size_t index_of(Base b) noexcept { return static_cast<std::size_t>(b); }

using Sequence = std::vector<Base>;

/// Parses an upper-case A/C/G/T/N string; anything else is an InvalidSequence error.
Sequence parse_sequence(std::string_view text);
std::string to_string(std::span<const Base> bases);

/// A sequenced read with its four per-base Phred tracks. Immutable once built.
class ReadRecord {
 public:
  ReadRecord(Sequence bases, std::vector<Phred> base_qual, std::vector<Phred> ins_qual,
             std::vector<Phred> del_qual, std::vector<Phred> gcp_qual,
             std::size_t max_length = kMaxReadLength);

  std::size_t length() const noexcept { return bases_.size(); }
  std::span<const Base> bases() const noexcept { return bases_; }
  std::span<const Phred> base_qual() const noexcept { return base_qual_; }
  std::span<const Phred> ins_qual() const noexcept { return ins_qual_; }
  std::span<const Phred> del_qual() const noexcept { return del_qual_; }
  std::span<const Phred> gcp_qual() const noexcept { return gcp_qual_; }

  friend bool operator==(const ReadRecord&, const ReadRecord&) = default;

 private:
  Sequence bases_;
  std::vector<Phred> base_qual_;
  std::vector<Phred> ins_qual_;
  std::vector<Phred> del_qual_;
  std::vector<Phred> gcp_qual_;
};

class Haplotype {
 public:
  explicit Haplotype(Sequence bases);

  std::size_t length() const noexcept { return bases_.size(); }
  std::span<const Base> bases() const noexcept { return bases_; }

  friend bool operator==(const Haplotype&, const Haplotype&) = default;

 private:
  Sequence bases_;
};

/// A read set and a haplotype set to be aligned all-against-all.
class Batch {
 public:
  Batch(std::vector<ReadRecord> reads, std::vector<Haplotype> haps);

  const std::vector<ReadRecord>& reads() const noexcept { return reads_; }
  const std::vector<Haplotype>& haps() const noexcept { return haps_; }
  std::size_t num_items() const noexcept { return reads_.size() * haps_.size(); }

  friend bool operator==(const Batch&, const Batch&) = default;

 private:
  std::vector<ReadRecord> reads_;
  std::vector<Haplotype> haps_;
};

struct WorkItem {
  std::uint32_t batch_index = 0;
  std::uint32_t read_index = 0;
  std::uint32_t hap_index = 0;
  std::uint64_t global_id = 0;

  friend bool operator==(const WorkItem&, const WorkItem&) = default;
};

/// Cross product of every batch in batch-major, read-major, hap-minor order.
/// global_id is the position in that order.
std::vector<WorkItem> enumerate_work_items(std::span<const Batch> batches);

std::uint64_t count_work_items(std::span<const Batch> batches) noexcept;

enum class Precision { Single, Double };

std::string_view to_string(Precision p) noexcept;

/// Boundary scale exponent used when none is given: 2^120 keeps single-precision
/// intermediates in range for long reads; double needs none.
constexpr int default_scale_log2(Precision p) noexcept { return p == Precision::Single ? 120 : 0; }

/// A lane-group tiling: p lanes, each owning k consecutive read positions.
struct EngineConfig {
  int p = 4;
  int k = 8;
  Precision precision = Precision::Single;
  int scale_log2 = default_scale_log2(Precision::Single);

  static EngineConfig make(int p, int k, Precision precision);

  std::size_t max_read_length() const noexcept { return static_cast<std::size_t>(p) * static_cast<std::size_t>(k); }

  /// Throws InvalidConfig unless p and k are in the supported domain and p*k >= 8.
  void validate() const;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

std::string to_string(const EngineConfig& cfg);

/// {2,4,8,16,32} x {4,8,...,32}, ordered by p then k.
std::vector<EngineConfig> default_configs(Precision precision = Precision::Single);
std::vector<EngineConfig> default_configs(Precision precision, int scale_log2);

struct Score {
  double log10_likelihood = 0.0;
};

/// Score slots addressed by global_id. Distinct slots may be written concurrently.
class ScoreSink {
 public:
  explicit ScoreSink(std::size_t size);

  void set(std::uint64_t global_id, Score score);
  void fail(std::uint64_t global_id, ErrorKind kind);

  std::size_t size() const noexcept { return values_.size(); }
  bool has_score(std::uint64_t global_id) const;
  std::optional<ErrorKind> error(std::uint64_t global_id) const;
  /// Throws std::logic_error if the slot holds no score.
  Score score(std::uint64_t global_id) const;
  std::span<const double> values() const noexcept { return values_; }

 private:
  enum : std::uint8_t { kPending = 0, kScored = 1, kFailed = 2 };
  std::vector<double> values_;
  std::vector<std::uint8_t> state_;
  std::vector<ErrorKind> errors_;
};

}  // namespace pairhmm
