#pragma once

// Batch text format, one record per line:
//
//   # comment
//   BATCH <num_reads> <num_haps>
//   READ <bases> <baseQ> <insQ> <delQ> <gcpQ>     (num_reads lines, Phred+33)
//   HAP <bases>                                    (num_haps lines)
//
// Score output: "<batch> <read> <hap> <log10>" per item in global_id order with
// six decimals ("NA" for failed items), then "# error ..." lines and a closing
// "# cells=<N> seconds=<t> gcups=<g>" line.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "pairhmm/model.hpp"
#include "pairhmm/pipeline.hpp"

namespace pairhmm {

/// Throws Parse errors of the form "<source>:<line>:<column>: <message>".
std::vector<Batch> parse_batches(std::istream& in, std::string_view source = "<input>",
                                 std::size_t max_read_length = kMaxReadLength);
std::vector<Batch> parse_batch_file(const std::filesystem::path& path, std::size_t max_read_length = kMaxReadLength);

void write_batches(std::ostream& out, std::span<const Batch> batches);
void write_batch_file(const std::filesystem::path& path, std::span<const Batch> batches);

void write_scores(std::ostream& out, std::span<const Batch> batches, const ScoreSink& scores, const RunReport& report);

}  // namespace pairhmm
