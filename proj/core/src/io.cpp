#include "pairhmm/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace pairhmm {

namespace {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

std::vector<Token> split(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.push_back(Token{line.substr(start, i - start), start + 1});
  }
  return out;
}

class LineParser {
 public:
  LineParser(std::istream& in, std::string_view source) : in_(in), source_(source) {}

  /// Next non-blank, non-comment line split into tokens; false at end of input.
  bool next(std::vector<Token>& tokens) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      tokens = split(line_);
      if (tokens.empty() || tokens.front().text.front() == '#') continue;
      return true;
    }
    if (in_.bad()) throw Error(ErrorKind::Io, std::string(source_) + ": read failure");
    return false;
  }

  [[noreturn]] void fail(std::size_t column, const std::string& message) const {
    throw Error(ErrorKind::Parse,
                std::string(source_) + ":" + std::to_string(line_no_) + ":" + std::to_string(column) + ": " + message);
  }

  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::string_view source_;
  std::string line_;
  std::size_t line_no_ = 0;
};

std::size_t parse_count(const LineParser& lp, const Token& tok) {
  std::size_t value = 0;
  const auto* end = tok.text.data() + tok.text.size();
  auto [ptr, ec] = std::from_chars(tok.text.data(), end, value);
  if (ec != std::errc() || ptr != end || value == 0) lp.fail(tok.column, "expected a positive count, got '" + std::string(tok.text) + "'");
  return value;
}

Sequence parse_bases(const LineParser& lp, const Token& tok) {
  Sequence out;
  out.reserve(tok.text.size());
  for (std::size_t i = 0; i < tok.text.size(); ++i) {
    auto b = base_from_char(tok.text[i]);
    if (!b) lp.fail(tok.column + i, "illegal base character '" + std::string(1, tok.text[i]) + "'");
    out.push_back(*b);
  }
  return out;
}

std::vector<Phred> parse_quals(const LineParser& lp, const Token& tok, std::size_t expected, std::string_view track) {
  if (tok.text.size() != expected) {
    lp.fail(tok.column, std::string(track) + " quality string has length " + std::to_string(tok.text.size()) +
                            ", bases have length " + std::to_string(expected));
  }
  std::vector<Phred> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < tok.text.size(); ++i) {
    const int q = static_cast<unsigned char>(tok.text[i]) - 33;
    if (q < 0 || q > kMaxPhred) {
      lp.fail(tok.column + i, "illegal quality character '" + std::string(1, tok.text[i]) + "'");
    }
    out.push_back(static_cast<Phred>(q));
  }
  return out;
}

char phred_char(Phred q) { return static_cast<char>(q + 33); }

void write_quals(std::ostream& out, std::span<const Phred> quals) {
  for (Phred q : quals) out.put(phred_char(q));
}

}  // namespace

std::vector<Batch> parse_batches(std::istream& in, std::string_view source, std::size_t max_read_length) {
  LineParser lp(in, source);
  std::vector<Batch> batches;
  std::vector<Token> tokens;
  while (lp.next(tokens)) {
    if (tokens[0].text != "BATCH") lp.fail(tokens[0].column, "expected BATCH header, got '" + std::string(tokens[0].text) + "'");
    if (tokens.size() != 3) lp.fail(tokens[0].column, "BATCH header needs <num_reads> <num_haps>");
    const std::size_t num_reads = parse_count(lp, tokens[1]);
    const std::size_t num_haps = parse_count(lp, tokens[2]);
    const std::size_t header_line = lp.line_no();

    std::vector<ReadRecord> reads;
    reads.reserve(num_reads);
    for (std::size_t r = 0; r < num_reads; ++r) {
      if (!lp.next(tokens)) {
        throw Error(ErrorKind::Parse, std::string(source) + ":" + std::to_string(header_line) + ":1: batch declares " +
                                          std::to_string(num_reads) + " reads but the input ends after " +
                                          std::to_string(r));
      }
      if (tokens[0].text != "READ") {
        lp.fail(tokens[0].column, "batch declares " + std::to_string(num_reads) + " reads, found only " +
                                      std::to_string(r) + " before '" + std::string(tokens[0].text) + "'");
      }
      if (tokens.size() != 6) lp.fail(tokens[0].column, "READ needs <bases> <baseQ> <insQ> <delQ> <gcpQ>");
      Sequence bases = parse_bases(lp, tokens[1]);
      const std::size_t m = bases.size();
      auto bq = parse_quals(lp, tokens[2], m, "base");
      auto iq = parse_quals(lp, tokens[3], m, "insertion");
      auto dq = parse_quals(lp, tokens[4], m, "deletion");
      auto gq = parse_quals(lp, tokens[5], m, "gap-continuation");
      try {
        reads.emplace_back(std::move(bases), std::move(bq), std::move(iq), std::move(dq), std::move(gq),
                           max_read_length);
      } catch (const Error& e) {
        lp.fail(tokens[1].column, e.what());
      }
    }

    std::vector<Haplotype> haps;
    haps.reserve(num_haps);
    for (std::size_t h = 0; h < num_haps; ++h) {
      if (!lp.next(tokens)) {
        throw Error(ErrorKind::Parse, std::string(source) + ":" + std::to_string(header_line) + ":1: batch declares " +
                                          std::to_string(num_haps) + " haplotypes but the input ends after " +
                                          std::to_string(h));
      }
      if (tokens[0].text != "HAP") {
        lp.fail(tokens[0].column, "batch declares " + std::to_string(num_haps) + " haplotypes, found only " +
                                      std::to_string(h) + " before '" + std::string(tokens[0].text) + "'");
      }
      if (tokens.size() != 2) lp.fail(tokens[0].column, "HAP needs exactly one base string");
      haps.emplace_back(parse_bases(lp, tokens[1]));
    }
    batches.emplace_back(std::move(reads), std::move(haps));
  }
  return batches;
}

std::vector<Batch> parse_batch_file(const std::filesystem::path& path, std::size_t max_read_length) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return parse_batches(in, path.string(), max_read_length);
}

void write_batches(std::ostream& out, std::span<const Batch> batches) {
  for (const auto& batch : batches) {
    out << "BATCH " << batch.reads().size() << ' ' << batch.haps().size() << '\n';
    for (const auto& read : batch.reads()) {
      out << "READ " << to_string(read.bases()) << ' ';
      write_quals(out, read.base_qual());
      out << ' ';
      write_quals(out, read.ins_qual());
      out << ' ';
      write_quals(out, read.del_qual());
      out << ' ';
      write_quals(out, read.gcp_qual());
      out << '\n';
    }
    for (const auto& hap : batch.haps()) out << "HAP " << to_string(hap.bases()) << '\n';
  }
}

void write_batch_file(const std::filesystem::path& path, std::span<const Batch> batches) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  write_batches(out, batches);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

void write_scores(std::ostream& out, std::span<const Batch> batches, const ScoreSink& scores, const RunReport& report) {
  char buf[64];
  std::uint64_t id = 0;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    for (std::size_t r = 0; r < batches[b].reads().size(); ++r) {
      for (std::size_t h = 0; h < batches[b].haps().size(); ++h, ++id) {
        out << b << ' ' << r << ' ' << h << ' ';
        if (scores.has_score(id)) {
          std::snprintf(buf, sizeof buf, "%.6f", scores.score(id).log10_likelihood);
          out << buf << '\n';
        } else {
          out << "NA\n";
        }
      }
    }
  }
  for (const auto& err : report.errors) out << "# error " << err.global_id << ' ' << to_string(err.kind) << '\n';
  std::snprintf(buf, sizeof buf, "%.6f", report.wall_seconds);
  out << "# cells=" << report.total_cells << " seconds=" << buf;
  std::snprintf(buf, sizeof buf, "%.6f", report.gcups);
  out << " gcups=" << buf << '\n';
}

}  // namespace pairhmm
