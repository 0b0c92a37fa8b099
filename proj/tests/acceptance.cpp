// Acceptance suite: one PASS/FAIL line per criterion.
//
//   pairhmm_acceptance              run every criterion
//   pairhmm_acceptance --only NAME  run one criterion
//   pairhmm_acceptance --list       print criterion names
//
// Exit status is non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pairhmm/io.hpp"
#include "pairhmm/partition.hpp"
#include "pairhmm/pipeline.hpp"
#include "pairhmm/prob.hpp"
#include "pairhmm/reference.hpp"
#include "pairhmm/synthetic.hpp"
#include "pairhmm/wavefront.hpp"
#include "support/oracles.hpp"

namespace pairhmm::acceptance {
namespace {

// Thresholds.
constexpr std::size_t kOraclePairs = 10'000;
constexpr double kSingleTolerance = 1e-3;
constexpr double kHandTolerance = 1e-9;
constexpr std::size_t kInvariancePairs = 1'000;
constexpr std::size_t kQualityTriples = 100'000;
constexpr double kRowSumTolerance = 1e-12;
constexpr std::size_t kDeterminismItems = 100'000;
constexpr double kMinSpeedup = 4.0;
constexpr double kMinScaling = 3.0;
constexpr unsigned kScalingWorkers = 8;
constexpr double kScaleTolerance = 1e-12;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <class... Args>
std::string format(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

Outcome oracle_equivalence() {
  const auto pairs = testing::random_pairs(kOraclePairs, 0xACCE55, {1, kMaxReadLength});
  const auto single = default_configs(Precision::Single);
  const auto dbl = default_configs(Precision::Double);
  double max_dev = 0.0;
  std::size_t errors = 0, identical = 0;
  for (const auto& [read, hap] : pairs) {
    try {
      const double ref = forward_reference(read, hap).log10_likelihood;
      const double f32 = forward_wavefront(read, hap, select_config(read.length(), single)).log10_likelihood;
      const double f64 = forward_wavefront(read, hap, select_config(read.length(), dbl)).log10_likelihood;
      max_dev = std::max(max_dev, std::abs(f32 - ref));
      if (f64 == ref) ++identical;
    } catch (const Error&) {
      ++errors;
    }
  }
  const bool pass = errors == 0 && max_dev <= kSingleTolerance && identical == pairs.size();
  return {pass, format("pairs=%zu errors=%zu f32_max_abs_dlog10=%.3g (<= %g) f64_bit_identical=%zu/%zu", pairs.size(),
                       errors, max_dev, kSingleTolerance, identical, pairs.size())};
}

Outcome hand_checks() {
  const auto read = testing::make_read("A", 10, 40, 40, 10);
  const Haplotype same(parse_sequence("A"));
  const Haplotype other(parse_sequence("C"));
  const auto cfg = EngineConfig::make(2, 4, Precision::Double);
  const double expected_match = std::log10(0.81);
  const double expected_mismatch = std::log10(0.03);
  double worst = 0.0;
  for (double got : {forward_reference(read, same).log10_likelihood, forward_wavefront(read, same, cfg).log10_likelihood}) {
    worst = std::max(worst, std::abs(got - expected_match));
  }
  for (double got :
       {forward_reference(read, other).log10_likelihood, forward_wavefront(read, other, cfg).log10_likelihood}) {
    worst = std::max(worst, std::abs(got - expected_mismatch));
  }
  const double match = forward_reference(read, same).log10_likelihood;
  const double mismatch = forward_reference(read, other).log10_likelihood;
  return {worst <= kHandTolerance,
          format("match=%.5f mismatch=%.5f max_abs_error=%.3g (<= %g)", match, mismatch, worst, kHandTolerance)};
}

Outcome config_padding_invariance() {
  const auto pairs = testing::random_pairs(kInvariancePairs, 0xC0F16, {1, kMaxReadLength});
  std::size_t comparisons = 0, mismatches = 0, errors = 0;
  for (Precision precision : {Precision::Single, Precision::Double}) {
    const auto configs = default_configs(precision);
    for (const auto& [read, hap] : pairs) {
      // One staging per padded length; the first fitting config is the baseline.
      std::optional<double> baseline;
      for (const auto& cfg : configs) {
        if (cfg.max_read_length() < read.length()) continue;
        try {
          const double s = forward_wavefront(read, hap, cfg).log10_likelihood;
          if (!baseline) {
            baseline = s;
          } else {
            ++comparisons;
            if (s != *baseline) ++mismatches;
          }
        } catch (const Error&) {
          ++errors;
        }
      }
    }
  }
  return {mismatches == 0 && errors == 0,
          format("pairs=%zu comparisons=%zu mismatches=%zu errors=%zu", pairs.size(), comparisons, mismatches, errors)};
}

Outcome transition_emission_invariants() {
  std::mt19937_64 rng(0x7A7E);
  std::uniform_int_distribution<int> q(0, kMaxPhred);
  double worst_match = 0.0, worst_gap = 0.0;
  std::size_t tested = 0, degenerate = 0;
  while (tested < kQualityTriples) {
    const auto ins = static_cast<Phred>(q(rng));
    const auto del = static_cast<Phred>(q(rng));
    const auto gcp = static_cast<Phred>(q(rng));
    try {
      const auto tp = build_transitions(testing::make_read("A", 30, ins, del, gcp));
      worst_match = std::max(worst_match, std::abs(tp.alpha[0] + tp.delta[0] + tp.zeta[0] - 1.0));
      worst_gap = std::max(worst_gap, std::abs(tp.beta[0] + tp.epsilon[0] - 1.0));
      ++tested;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateTransition) throw;
      ++degenerate;
    }
  }

  // Emission table entries against direct evaluation, for the table itself and
  // for the staged single and double copies.
  std::size_t entries = 0, wrong = 0;
  const auto configs = default_configs(Precision::Single);
  for (const auto& [read, hap] : testing::random_pairs(200, 0xE3155, {1, kMaxReadLength})) {
    const auto& cfg32 = select_config(read.length(), configs);
    const auto cfg64 = EngineConfig{cfg32.p, cfg32.k, Precision::Double, 0};
    const std::size_t padded = cfg32.max_read_length();
    const auto table = build_emission_table(read, padded);
    const PreparedRead<float> staged32(read, cfg32);
    const PreparedRead<double> staged64(read, cfg64);
    const auto p = static_cast<std::size_t>(cfg32.p);
    const auto k = static_cast<std::size_t>(cfg32.k);
    for (Base c : kAlphabet) {
      for (std::size_t i = 0; i < padded; ++i) {
        const double expected =
            i < read.length() ? emission_probability(read.bases()[i], c, phred_to_prob(read.base_qual()[i])) : 1.0;
        const std::size_t slot = index_of(c) * padded + (i % k) * p + i / k;
        ++entries;
        if (table.at(c, i) != expected || staged64.emission()[slot] != expected ||
            staged32.emission()[slot] != static_cast<float>(expected)) {
          ++wrong;
        }
      }
    }
  }
  const bool pass = worst_match <= kRowSumTolerance && worst_gap <= kRowSumTolerance && wrong == 0;
  return {pass, format("triples=%zu (degenerate skipped=%zu) max|a+d+z-1|=%.3g max|b+e-1|=%.3g (<= %g) "
                       "emission_entries=%zu wrong=%zu",
                       tested, degenerate, worst_match, worst_gap, kRowSumTolerance, entries, wrong)};
}

Outcome partitioner_totals() {
  std::mt19937_64 rng(0x9A27);
  std::uniform_int_distribution<std::size_t> len(1, kMaxReadLength), count(1, 8);
  const auto configs = default_configs();
  std::size_t items = 0, violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Batch> batches;
    const std::size_t nb = count(rng);
    for (std::size_t b = 0; b < nb; ++b) {
      std::vector<ReadRecord> reads;
      const std::size_t nr = count(rng);
      for (std::size_t r = 0; r < nr; ++r) reads.push_back(testing::make_read(std::string(len(rng), 'A'), 30, 40, 40, 10));
      std::vector<Haplotype> haps;
      const std::size_t nh = count(rng);
      for (std::size_t h = 0; h < nh; ++h) haps.emplace_back(Sequence(len(rng), Base::C));
      batches.emplace_back(std::move(reads), std::move(haps));
    }
    const auto plan = build_plan(batches, configs);
    std::vector<int> seen(plan.items.size(), 0);
    for (std::size_t c = 0; c < plan.index_lists.size(); ++c) {
      for (auto id : plan.index_lists[c]) {
        ++seen[id];
        const auto& it = plan.items[id];
        if (testing::brute_force_select(batches[it.batch_index].reads()[it.read_index].length(), configs) != c) {
          ++violations;
        }
      }
    }
    for (int s : seen) violations += s != 1;
    items += plan.items.size();
  }
  const auto example = parse_batch_file(std::string(PAIRHMM_TEST_DATA_DIR) + "/three_batches.txt");
  const auto example_plan = build_plan(example, configs);
  const bool pass = violations == 0 && example_plan.items.size() == 13;
  return {pass, format("random_items=%zu violations=%zu example_items=%zu (expect 13)", items, violations,
                       example_plan.items.size())};
}

std::vector<Batch> determinism_dataset() {
  SyntheticSpec spec;
  spec.num_batches = 250;
  spec.reads_per_batch = 20;
  spec.haps_per_batch = 20;
  spec.read_length = LengthSpec::range(10, 100);
  spec.hap_length = LengthSpec::range(50, 150);
  spec.seed = 0xD00D;
  return generate_synthetic(spec);
}

std::string score_text(std::span<const Batch> batches, const RunResult& result) {
  std::ostringstream out;
  write_scores(out, batches, result.scores, result.report);
  std::string text = out.str();
  // drop the timing line
  const auto cut = text.rfind("# cells=");
  return text.substr(0, cut);
}

Outcome pipeline_determinism() {
  const auto batches = determinism_dataset();
  const auto configs = default_configs();
  std::string baseline;
  std::size_t runs = 0, differing = 0;
  for (unsigned workers : {1u, 2u, 8u}) {
    for (std::size_t budget : {std::size_t{1} << 20, kDefaultChunkBudget}) {
      const std::string text = score_text(batches, run(batches, configs, RunOptions{budget, workers}));
      if (runs++ == 0) {
        baseline = text;
      } else if (text != baseline) {
        ++differing;
      }
    }
  }
  const auto items = count_work_items(batches);
  return {differing == 0 && items >= kDeterminismItems,
          format("items=%llu runs=%zu differing=%zu output_bytes=%zu", static_cast<unsigned long long>(items), runs,
                 differing, baseline.size())};
}

std::vector<Batch> fixed_256_batch(std::size_t reads) {
  return generate_synthetic(1, reads, 16, LengthSpec::fixed(256), LengthSpec::fixed(256), 0x256);
}

Outcome throughput_accounting() {
  const auto batches = determinism_dataset();
  const auto result = run(batches, default_configs(), RunOptions{kDefaultChunkBudget, 2});
  std::uint64_t cells = 0;
  for (const auto& it : enumerate_work_items(batches)) {
    if (!result.scores.has_score(it.global_id)) continue;
    const auto& b = batches[it.batch_index];
    cells += static_cast<std::uint64_t>(b.reads()[it.read_index].length()) * b.haps()[it.hap_index].length();
  }
  const auto& r = result.report;
  const double recomputed = static_cast<double>(cells) / (r.wall_seconds * 1e9);
  const bool pass = cells == r.total_cells && recomputed == r.gcups;
  return {pass, format("total_cells=%llu recomputed=%llu gcups=%.6f recomputed_gcups=%.6f",
                       static_cast<unsigned long long>(r.total_cells), static_cast<unsigned long long>(cells), r.gcups,
                       recomputed)};
}

template <class Fn>
double best_seconds(int repeats, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

Outcome wavefront_speedup() {
  const auto batches = fixed_256_batch(16);
  const double cells = static_cast<double>(16 * 16 * 256 * 256);
  volatile double sink = 0.0;
  const double ref_secs = best_seconds(3, [&] {
    for (const auto& read : batches[0].reads()) {
      for (const auto& hap : batches[0].haps()) sink = sink + forward_reference_linear_space(read, hap).log10_likelihood;
    }
  });
  const auto configs = default_configs(Precision::Single);
  const double wf_secs = best_seconds(3, [&] { run(batches, configs, RunOptions{kDefaultChunkBudget, 1}); });
  const double ref_rate = cells / ref_secs / 1e9;
  const double wf_rate = cells / wf_secs / 1e9;
  const double speedup = wf_rate / ref_rate;
  return {speedup >= kMinSpeedup, format("reference_gcups=%.3f wavefront_f32_1thread_gcups=%.3f speedup=%.2fx (>= %.1fx)",
                                         ref_rate, wf_rate, speedup, kMinSpeedup)};
}

Outcome worker_scaling() {
  const auto batches = fixed_256_batch(64);
  const auto configs = default_configs(Precision::Single);
  const double one = best_seconds(3, [&] { run(batches, configs, RunOptions{kDefaultChunkBudget, 1}); });
  const double many = best_seconds(3, [&] { run(batches, configs, RunOptions{kDefaultChunkBudget, kScalingWorkers}); });
  const double scaling = one / many;
  return {scaling >= kMinScaling,
          format("workers=1: %.4fs workers=%u: %.4fs scaling=%.2fx (>= %.1fx) hardware_threads=%u", one,
                 kScalingWorkers, many, scaling, kMinScaling, std::thread::hardware_concurrency())};
}

Outcome scale_invariance() {
  const auto pairs = testing::random_pairs(kInvariancePairs, 0x5CA1E, {1, kMaxReadLength});
  const auto configs = default_configs(Precision::Double, 0);
  double worst = 0.0;
  std::size_t errors = 0;
  for (const auto& [read, hap] : pairs) {
    try {
      worst = std::max(worst, std::abs(forward_reference(read, hap, 0).log10_likelihood -
                                       forward_reference(read, hap, 120).log10_likelihood));
      auto cfg = select_config(read.length(), configs);
      const double unscaled = forward_wavefront(read, hap, cfg).log10_likelihood;
      cfg.scale_log2 = 120;
      worst = std::max(worst, std::abs(unscaled - forward_wavefront(read, hap, cfg).log10_likelihood));
    } catch (const Error&) {
      ++errors;
    }
  }
  return {worst <= kScaleTolerance && errors == 0,
          format("pairs=%zu errors=%zu max_abs_dlog10=%.3g (<= %g)", pairs.size(), errors, worst, kScaleTolerance)};
}

struct Criterion {
  const char* name;
  Outcome (*fn)();
};

constexpr Criterion kCriteria[] = {
    {"oracle-equivalence", oracle_equivalence},
    {"hand-checks", hand_checks},
    {"config-padding-invariance", config_padding_invariance},
    {"transition-emission-invariants", transition_emission_invariants},
    {"partitioner-totals", partitioner_totals},
    {"pipeline-determinism", pipeline_determinism},
    {"throughput-accounting", throughput_accounting},
    {"wavefront-speedup", wavefront_speedup},
    {"worker-scaling", worker_scaling},
    {"scale-invariance", scale_invariance},
};

}  // namespace
}  // namespace pairhmm::acceptance

int main(int argc, char** argv) {
  using namespace pairhmm::acceptance;
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--list") == 0) {
      for (const auto& c : kCriteria) std::printf("%s\n", c.name);
      return 0;
    }
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--list] [--only NAME]\n", argv[0]);
      return 2;
    }
  }

  int failed = 0, ran = 0;
  for (const auto& c : kCriteria) {
    if (!only.empty() && only != c.name) continue;
    ++ran;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %-32s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
