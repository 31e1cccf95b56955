#pragma once

// On-disk formats. CSV: comma separated, '.' decimal point, header row, LF
// line endings, doubles in shortest round-trip form. PGM: ASCII "P2".

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "entropix/grid.hpp"
#include "entropix/harness/run.hpp"

namespace entropix::harness {

std::string format_double(double value);

// Header "c0,...,c{w-1}", then one line per grid row.
void write_tokens_csv(std::ostream& out, const TokenGrid& tokens);
void write_entropy_csv(std::ostream& out, const EntropyMap& entropy);

// pixel = round(255 * eps / ln V), clamped to [0, 255].
void write_entropy_pgm(std::ostream& out, const EntropyMap& entropy, std::size_t vocab_size);

// Two columns: metric,value.
void write_report_csv(std::ostream& out, const RunReport& report);
void write_histogram_csv(std::ostream& out, const RunReport& report);
void write_scales_csv(std::ostream& out, const RunReport& report);
void write_sweep_csv(std::ostream& out, std::string_view parameter,
                     std::span<const SweepRow> rows);

// tokens.csv, entropy.csv, entropy.pgm, report.csv, histogram.csv (and
// scales.csv in scale mode). Wall time is kept out of these files so that
// they are byte-identical across runs; it goes to timing.csv.
void write_run_artifacts(const std::filesystem::path& dir, const RunConfig& config,
                         const RunOutput& output);

// entropy.csv and entropy.pgm only.
void write_entropy_artifacts(const std::filesystem::path& dir, const RunConfig& config,
                             const RunOutput& output);

}  // namespace entropix::harness
