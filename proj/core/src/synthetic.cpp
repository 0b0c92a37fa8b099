#include "pairhmm/synthetic.hpp"

#include <random>
#include <string>

#include "pairhmm/prob.hpp"

namespace pairhmm {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  Base base() { return static_cast<Base>(below(4)); }
  Base other_base(Base b) { return static_cast<Base>((index_of(b) + 1 + below(3)) % 4); }

 private:
  std::mt19937_64 engine_;
};

void check(const SyntheticSpec& spec) {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidSpec, what); };
  if (spec.num_batches == 0 || spec.reads_per_batch == 0 || spec.haps_per_batch == 0) bad("batch, read and haplotype counts must be positive");
  if (spec.read_length.min == 0 || spec.read_length.min > spec.read_length.max) bad("invalid read length range");
  if (spec.hap_length.min == 0 || spec.hap_length.min > spec.hap_length.max) bad("invalid haplotype length range");
  if (spec.read_length.max > kMaxReadLength) bad("reads longer than " + std::to_string(kMaxReadLength) + " are not supported");
  const auto& q = spec.quality;
  if (q.base_min > q.base_max || q.base_max > kMaxPhred) bad("invalid base quality range");
  if (q.gap_open_min > q.gap_open_max || q.gap_open_max > kMaxPhred) bad("invalid gap-open quality range");
  if (q.gap_continuation > kMaxPhred) bad("invalid gap-continuation quality");
  if (phred_to_prob(q.gap_open_min) * 2 >= 1.0) bad("gap-open qualities below 4 make the match transition degenerate");
}

}  // namespace

std::vector<Batch> generate_synthetic(const SyntheticSpec& spec) {
  check(spec);
  Rng rng(spec.seed);
  const auto& q = spec.quality;
  std::vector<Batch> batches;
  batches.reserve(spec.num_batches);

  for (std::size_t b = 0; b < spec.num_batches; ++b) {
    std::vector<Sequence> haps;
    haps.reserve(spec.haps_per_batch);
    Sequence region(rng.between(spec.hap_length.min, spec.hap_length.max));
    for (auto& base : region) base = rng.base();
    haps.push_back(region);
    for (std::size_t h = 1; h < spec.haps_per_batch; ++h) {
      Sequence hap(rng.between(spec.hap_length.min, spec.hap_length.max));
      for (std::size_t j = 0; j < hap.size(); ++j) {
        hap[j] = j < region.size() ? region[j] : rng.base();
        if (rng.unit() < 0.01) hap[j] = rng.other_base(hap[j]);
      }
      haps.push_back(std::move(hap));
    }

    std::vector<ReadRecord> reads;
    reads.reserve(spec.reads_per_batch);
    for (std::size_t r = 0; r < spec.reads_per_batch; ++r) {
      const std::size_t m = rng.between(spec.read_length.min, spec.read_length.max);
      const Sequence& source = haps[rng.below(haps.size())];
      const std::size_t offset = source.size() > m ? rng.below(source.size() - m + 1) : 0;
      Sequence bases(m);
      std::vector<Phred> bq(m), iq(m), dq(m), gq(m, q.gap_continuation);
      for (std::size_t i = 0; i < m; ++i) {
        bq[i] = static_cast<Phred>(rng.between(q.base_min, q.base_max));
        iq[i] = static_cast<Phred>(rng.between(q.gap_open_min, q.gap_open_max));
        dq[i] = static_cast<Phred>(rng.between(q.gap_open_min, q.gap_open_max));
        bases[i] = offset + i < source.size() ? source[offset + i] : rng.base();
        if (rng.unit() < phred_to_prob(bq[i])) bases[i] = rng.other_base(bases[i]);
      }
      reads.emplace_back(std::move(bases), std::move(bq), std::move(iq), std::move(dq), std::move(gq));
    }

    std::vector<Haplotype> hap_records;
    hap_records.reserve(haps.size());
    for (auto& h : haps) hap_records.emplace_back(std::move(h));
    batches.emplace_back(std::move(reads), std::move(hap_records));
  }
  return batches;
}

std::vector<Batch> generate_synthetic(std::size_t num_batches, std::size_t reads_per_batch,
                                      std::size_t haps_per_batch, LengthSpec read_length, LengthSpec hap_length,
                                      std::uint64_t seed) {
  SyntheticSpec spec;
  spec.num_batches = num_batches;
  spec.reads_per_batch = reads_per_batch;
  spec.haps_per_batch = haps_per_batch;
  spec.read_length = read_length;
  spec.hap_length = hap_length;
  spec.seed = seed;
  return generate_synthetic(spec);
}

}  // namespace pairhmm
