#include "pairhmm/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace pairhmm {

namespace {

void check_qualities(std::span<const Phred> qual, std::size_t m, std::string_view track) {
  if (qual.size() != m) {
    throw Error(ErrorKind::InvalidQuality, std::string(track) + " track has length " + std::to_string(qual.size()) +
                                               ", expected " + std::to_string(m));
  }
  for (std::size_t i = 0; i < qual.size(); ++i) {
    if (qual[i] > kMaxPhred) {
      throw Error(ErrorKind::InvalidQuality, std::string(track) + " quality " + std::to_string(qual[i]) +
                                                 " at position " + std::to_string(i) + " exceeds 93");
    }
  }
}

}  // namespace

std::optional<Base> base_from_char(char c) noexcept {
  switch (c) {
    case 'A': return Base::A;
    case 'C': return Base::C;
    case 'G': return Base::G;
    case 'T': return Base::T;
    case 'N': return Base::N;
    default: return std::nullopt;
  }
}

char to_char(Base b) noexcept {
  static constexpr char kChars[] = {'A', 'C', 'G', 'T', 'N'};
  return kChars[index_of(b)];
}

Sequence parse_sequence(std::string_view text) {
  Sequence out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto b = base_from_char(text[i]);
    if (!b) {
      throw Error(ErrorKind::InvalidSequence,
                  "illegal base '" + std::string(1, text[i]) + "' at position " + std::to_string(i));
    }
    out.push_back(*b);
  }
  return out;
}

std::string to_string(std::span<const Base> bases) {
  std::string s;
  s.reserve(bases.size());
  for (Base b : bases) s.push_back(to_char(b));
  return s;
}

ReadRecord::ReadRecord(Sequence bases, std::vector<Phred> base_qual, std::vector<Phred> ins_qual,
                       std::vector<Phred> del_qual, std::vector<Phred> gcp_qual, std::size_t max_length)
    : bases_(std::move(bases)),
      base_qual_(std::move(base_qual)),
      ins_qual_(std::move(ins_qual)),
      del_qual_(std::move(del_qual)),
      gcp_qual_(std::move(gcp_qual)) {
  const std::size_t m = bases_.size();
  if (m == 0) throw Error(ErrorKind::InvalidSequence, "read is empty");
  if (m > max_length) {
    throw Error(ErrorKind::ConfigTooSmall, "read length " + std::to_string(m) + " exceeds the largest supported length " +
                                               std::to_string(max_length));
  }
  check_qualities(base_qual_, m, "base");
  check_qualities(ins_qual_, m, "insertion");
  check_qualities(del_qual_, m, "deletion");
  check_qualities(gcp_qual_, m, "gap-continuation");
}

Haplotype::Haplotype(Sequence bases) : bases_(std::move(bases)) {
  if (bases_.empty()) throw Error(ErrorKind::InvalidSequence, "haplotype is empty");
}

Batch::Batch(std::vector<ReadRecord> reads, std::vector<Haplotype> haps) : reads_(std::move(reads)), haps_(std::move(haps)) {
  if (reads_.empty()) throw Error(ErrorKind::InvalidSequence, "batch has no reads");
  if (haps_.empty()) throw Error(ErrorKind::InvalidSequence, "batch has no haplotypes");
}

std::vector<WorkItem> enumerate_work_items(std::span<const Batch> batches) {
  std::vector<WorkItem> items;
  items.reserve(count_work_items(batches));
  std::uint64_t id = 0;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const auto& batch = batches[b];
    for (std::size_t r = 0; r < batch.reads().size(); ++r) {
      for (std::size_t h = 0; h < batch.haps().size(); ++h) {
        items.push_back(WorkItem{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(r),
                                 static_cast<std::uint32_t>(h), id++});
      }
    }
  }
  return items;
}

std::uint64_t count_work_items(std::span<const Batch> batches) noexcept {
  std::uint64_t n = 0;
  for (const auto& b : batches) n += b.num_items();
  return n;
}

std::string_view to_string(Precision p) noexcept { return p == Precision::Single ? "f32" : "f64"; }

EngineConfig EngineConfig::make(int p, int k, Precision precision) {
  EngineConfig cfg{p, k, precision, default_scale_log2(precision)};
  cfg.validate();
  return cfg;
}

void EngineConfig::validate() const {
  static constexpr int kLaneCounts[] = {2, 4, 8, 16, 32};
  const bool p_ok = std::find(std::begin(kLaneCounts), std::end(kLaneCounts), p) != std::end(kLaneCounts);
  const bool k_ok = k >= 4 && k <= 32 && k % 4 == 0;
  if (!p_ok || !k_ok) {
    throw Error(ErrorKind::InvalidConfig, "unsupported lane configuration " + to_string(*this));
  }
  if (p * k < 8) throw Error(ErrorKind::InvalidConfig, "configuration " + to_string(*this) + " holds fewer than 8 positions");
  if (scale_log2 < 0) throw Error(ErrorKind::InvalidConfig, "scale exponent must be non-negative");
  const int limit = precision == Precision::Single ? 126 : 1022;
  if (scale_log2 > limit) {
    throw Error(ErrorKind::InvalidConfig,
                "scale exponent " + std::to_string(scale_log2) + " overflows " + std::string(pairhmm::to_string(precision)));
  }
}

std::string to_string(const EngineConfig& cfg) { return std::to_string(cfg.p) + ":" + std::to_string(cfg.k); }

std::vector<EngineConfig> default_configs(Precision precision) {
  return default_configs(precision, default_scale_log2(precision));
}

std::vector<EngineConfig> default_configs(Precision precision, int scale_log2) {
  std::vector<EngineConfig> out;
  for (int p : {2, 4, 8, 16, 32}) {
    for (int k = 4; k <= 32; k += 4) {
      EngineConfig cfg{p, k, precision, scale_log2};
      cfg.validate();
      out.push_back(cfg);
    }
  }
  return out;
}

ScoreSink::ScoreSink(std::size_t size) : values_(size, 0.0), state_(size, kPending), errors_(size, ErrorKind::Io) {}

void ScoreSink::set(std::uint64_t global_id, Score score) {
  values_.at(global_id) = score.log10_likelihood;
  state_[global_id] = kScored;
}

void ScoreSink::fail(std::uint64_t global_id, ErrorKind kind) {
  errors_.at(global_id) = kind;
  state_[global_id] = kFailed;
}

bool ScoreSink::has_score(std::uint64_t global_id) const { return state_.at(global_id) == kScored; }

std::optional<ErrorKind> ScoreSink::error(std::uint64_t global_id) const {
  if (state_.at(global_id) == kFailed) return errors_[global_id];
  return std::nullopt;
}

Score ScoreSink::score(std::uint64_t global_id) const {
  if (!has_score(global_id)) throw std::logic_error("no score stored for global id " + std::to_string(global_id));
  return Score{values_[global_id]};
}

}  // namespace pairhmm
