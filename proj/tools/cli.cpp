#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "pairhmm/io.hpp"
#include "pairhmm/partition.hpp"
#include "pairhmm/pipeline.hpp"
#include "pairhmm/reference.hpp"
#include "pairhmm/synthetic.hpp"
#include "pairhmm/wavefront.hpp"

namespace pairhmm::cli {

namespace {

struct EngineOptions {
  std::string precision = "f32";
  int scale_log2 = -1;  // -1: precision default
  std::string configs;  // empty: default set
  unsigned threads = 0;
  std::size_t chunk_mb = kDefaultChunkBudget >> 20;
};

struct DataOptions {
  std::string input;
  std::size_t batches = 1;
  std::size_t reads = 32;
  std::size_t haps = 8;
  std::string read_len = "100";
  std::string hap_len = "150";
  std::size_t fixed_len = 0;
  std::uint64_t seed = 1;
};

unsigned default_threads() {
  if (const char* env = std::getenv("PAIRHMM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void add_engine_options(CLI::App* cmd, EngineOptions& o) {
  cmd->add_option("--precision", o.precision, "Arithmetic precision")->check(CLI::IsMember({"f32", "f64"}));
  cmd->add_option("--scale-log2", o.scale_log2, "Boundary scale exponent (default 120 for f32, 0 for f64)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--configs", o.configs, "Lane configurations as p:k,... (default: all supported)");
  cmd->add_option("--threads", o.threads, "Worker threads (default: $PAIRHMM_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--chunk-mb", o.chunk_mb, "Chunk memory budget in MiB")->check(CLI::PositiveNumber);
}

void add_generation_options(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--batches", d.batches, "Synthetic batches")->check(CLI::PositiveNumber);
  cmd->add_option("--reads", d.reads, "Reads per batch")->check(CLI::PositiveNumber);
  cmd->add_option("--haps", d.haps, "Haplotypes per batch")->check(CLI::PositiveNumber);
  cmd->add_option("--read-len", d.read_len, "Read length, N or MIN:MAX");
  cmd->add_option("--hap-len", d.hap_len, "Haplotype length, N or MIN:MAX");
  cmd->add_option("--seed", d.seed, "Random seed");
}

LengthSpec parse_length(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != s.size() || s.empty()) throw Error(ErrorKind::InvalidSpec, "invalid length '" + text + "'");
    return static_cast<std::size_t>(v);
  };
  const auto colon = text.find(':');
  if (colon == std::string::npos) return LengthSpec::fixed(number(text));
  return LengthSpec::range(number(text.substr(0, colon)), number(text.substr(colon + 1)));
}

Precision precision_of(const EngineOptions& o) { return o.precision == "f64" ? Precision::Double : Precision::Single; }

std::vector<EngineConfig> engine_configs(const EngineOptions& o) {
  const Precision precision = precision_of(o);
  const int scale = o.scale_log2 >= 0 ? o.scale_log2 : default_scale_log2(precision);
  if (o.configs.empty()) return default_configs(precision, scale);
  std::vector<EngineConfig> out;
  std::stringstream ss(o.configs);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    int p = 0, k = 0;
    try {
      if (colon == std::string::npos) throw std::invalid_argument(item);
      p = std::stoi(item.substr(0, colon));
      k = std::stoi(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidConfig, "invalid configuration '" + item + "', expected p:k");
    }
    EngineConfig cfg{p, k, precision, scale};
    cfg.validate();
    out.push_back(cfg);
  }
  if (out.empty()) throw Error(ErrorKind::InvalidConfig, "no configurations given");
  return out;
}

std::size_t max_read_length(const std::vector<EngineConfig>& configs) {
  std::size_t m = 0;
  for (const auto& c : configs) m = std::max(m, c.max_read_length());
  return m;
}

std::vector<Batch> load_or_generate(const DataOptions& d, std::size_t max_read) {
  if (!d.input.empty()) return parse_batch_file(d.input, max_read);
  SyntheticSpec spec;
  spec.num_batches = d.batches;
  spec.reads_per_batch = d.reads;
  spec.haps_per_batch = d.haps;
  spec.read_length = d.fixed_len ? LengthSpec::fixed(d.fixed_len) : parse_length(d.read_len);
  spec.hap_length = d.fixed_len ? LengthSpec::fixed(d.fixed_len) : parse_length(d.hap_len);
  spec.seed = d.seed;
  return generate_synthetic(spec);
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

nlohmann::json report_json(const RunReport& report) {
  nlohmann::json j;
  j["total_cells"] = report.total_cells;
  j["wall_seconds"] = report.wall_seconds;
  j["gcups"] = report.gcups;
  j["chunks"] = report.chunks;
  j["partial"] = report.partial;
  j["per_config"] = nlohmann::json::array();
  for (const auto& c : report.per_config) {
    j["per_config"].push_back({{"p", c.config.p},
                               {"k", c.config.k},
                               {"items", c.items},
                               {"cells", c.cells},
                               {"seconds", c.seconds}});
  }
  j["errors"] = nlohmann::json::array();
  for (const auto& e : report.errors) {
    j["errors"].push_back({{"global_id", e.global_id}, {"kind", std::string(to_string(e.kind))}});
  }
  return j;
}

int exit_code_for(const RunReport& report) {
  bool numeric = false, data = false;
  for (const auto& e : report.errors) (is_data_error(e.kind) ? data : numeric) = true;
  if (numeric) return kExitNumeric;
  if (data) return kExitData;
  return kExitOk;
}

int cmd_align(const std::string& input, const std::string& output, const std::string& report_path,
              const EngineOptions& eo, std::ostream& out) {
  const auto configs = engine_configs(eo);
  const auto batches = parse_batch_file(input, max_read_length(configs));
  RunOptions ro;
  ro.workers = eo.threads ? eo.threads : default_threads();
  ro.budget_bytes = eo.chunk_mb << 20;
  const RunResult result = run(batches, configs, ro);

  std::ofstream file;
  std::ostream* dest = &out;
  if (output != "-") {
    file.open(output);
    if (!file) throw Error(ErrorKind::Io, "cannot open " + output + " for writing");
    dest = &file;
  }
  write_scores(*dest, batches, result.scores, result.report);
  dest->flush();
  if (!*dest) throw Error(ErrorKind::Io, "failed writing " + output);

  if (!report_path.empty()) {
    std::ofstream rep(report_path);
    if (!rep) throw Error(ErrorKind::Io, "cannot open " + report_path + " for writing");
    rep << report_json(result.report).dump(2) << '\n';
  }
  return exit_code_for(result.report);
}

int cmd_verify(const DataOptions& d, const EngineOptions& eo, double tolerance, std::ostream& out) {
  const auto configs = engine_configs(eo);
  const auto batches = load_or_generate(d, max_read_length(configs));
  const bool exact = precision_of(eo) == Precision::Double;

  std::uint64_t pairs = 0, errors = 0, bit_identical = 0;
  double max_dev = 0.0;
  for (const auto& batch : batches) {
    for (const auto& read : batch.reads()) {
      const EngineConfig& cfg = select_config(read.length(), configs);
      for (const auto& hap : batch.haps()) {
        ++pairs;
        try {
          const double ref = forward_reference(read, hap).log10_likelihood;
          const double got = forward_wavefront(read, hap, cfg).log10_likelihood;
          max_dev = std::max(max_dev, std::abs(got - ref));
          if (got == ref) ++bit_identical;
        } catch (const Error& e) {
          ++errors;
          out << "# error pair " << pairs - 1 << ' ' << to_string(e.kind()) << '\n';
        }
      }
    }
  }
  out << "pairs=" << pairs << " errors=" << errors << " precision=" << eo.precision
      << " max_abs_dlog10=" << max_dev;
  if (exact) out << " bit_identical=" << bit_identical;
  out << " tolerance=" << tolerance << '\n';
  const bool ok = errors == 0 && max_dev <= tolerance;
  out << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitNumeric;
}

int cmd_bench(const DataOptions& d, const EngineOptions& eo, const std::string& engine, std::ostream& out) {
  const auto configs = engine_configs(eo);
  const auto batches = load_or_generate(d, max_read_length(configs));

  if (engine == "reference") {
    std::uint64_t cells = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& batch : batches) {
      for (const auto& read : batch.reads()) {
        for (const auto& hap : batch.haps()) {
          try {
            forward_reference_linear_space(read, hap);
            cells += static_cast<std::uint64_t>(read.length()) * hap.length();
          } catch (const Error&) {
          }
        }
      }
    }
    const double secs = std::max(1e-9, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    out << "engine=reference threads=1\n";
    out << "cells=" << cells << " seconds=" << fixed6(secs) << " gcups=" << fixed6(throughput(cells, secs)) << '\n';
    return kExitOk;
  }

  RunOptions ro;
  ro.workers = eo.threads ? eo.threads : default_threads();
  ro.budget_bytes = eo.chunk_mb << 20;
  const RunResult result = run(batches, configs, ro);
  const RunReport& r = result.report;
  out << "engine=wavefront precision=" << eo.precision << " threads=" << ro.workers << " chunks=" << r.chunks
      << " items=" << result.scores.size() << " errors=" << r.errors.size() << '\n';
  for (const auto& c : r.per_config) {
    out << "  config " << to_string(c.config) << " items=" << c.items << " cells=" << c.cells
        << " task_seconds=" << fixed6(c.seconds) << '\n';
  }
  out << "cells=" << r.total_cells << " seconds=" << fixed6(r.wall_seconds) << " gcups=" << fixed6(r.gcups) << '\n';
  return r.errors.empty() ? kExitOk : exit_code_for(r);
}

int cmd_gen(const DataOptions& d, const std::string& output) {
  const auto batches = load_or_generate(d, kMaxReadLength);
  if (output == "-") {
    throw Error(ErrorKind::Io, "gen needs a file path for --output");
  }
  write_batch_file(output, batches);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pair-HMM forward likelihoods with a lane-tiled wavefront engine", "pairhmm"};
  app.require_subcommand(1);

  EngineOptions eo;
  DataOptions data;
  std::string output, report_path, engine = "wavefront";
  double tolerance = 1e-3;

  auto* align = app.add_subcommand("align", "Score every read-haplotype pair of a batch file");
  align->add_option("--input", data.input, "Batch file")->required();
  align->add_option("--output", output, "Score file ('-' for stdout)")->required();
  align->add_option("--report", report_path, "Write the run report as JSON");
  add_engine_options(align, eo);

  auto* verify = app.add_subcommand("verify", "Compare the wavefront engine against the reference engine");
  verify->add_option("--input", data.input, "Batch file (default: generate pairs)");
  verify->add_option("--pairs", data.batches, "Generated pairs (one read and one haplotype each)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--tolerance", tolerance, "Largest accepted |delta log10|");
  verify->add_option("--read-len", data.read_len, "Read length, N or MIN:MAX");
  verify->add_option("--hap-len", data.hap_len, "Haplotype length, N or MIN:MAX");
  verify->add_option("--seed", data.seed, "Random seed");
  add_engine_options(verify, eo);

  auto* bench = app.add_subcommand("bench", "Time the pipeline and report GCUPS");
  bench->add_option("--input", data.input, "Batch file (default: generate)");
  bench->add_option("--fixed-len", data.fixed_len, "Generate reads and haplotypes of this one length");
  bench->add_option("--engine", engine, "Engine to time")->check(CLI::IsMember({"wavefront", "reference"}));
  add_generation_options(bench, data);
  add_engine_options(bench, eo);

  auto* gen = app.add_subcommand("gen", "Write a synthetic batch file");
  gen->add_option("--output", output, "Destination file")->required();
  add_generation_options(gen, data);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (*align) return cmd_align(data.input, output, report_path, eo, out);
    if (*verify) {
      if (data.input.empty()) {
        data.reads = 1;
        data.haps = 1;
        if (verify->count("--pairs") == 0) data.batches = 1000;
        if (verify->count("--read-len") == 0) data.read_len = "10:151";
        if (verify->count("--hap-len") == 0) data.hap_len = "151:521";
      }
      return cmd_verify(data, eo, tolerance, out);
    }
    if (*bench) return cmd_bench(data, eo, engine, out);
    if (*gen) return cmd_gen(data, output);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_data_error(e.kind()) ? kExitData : kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace pairhmm::cli
