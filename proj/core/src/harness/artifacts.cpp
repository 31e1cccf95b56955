#include "entropix/harness/artifacts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace entropix::harness {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

template <typename T, typename Fmt>
void write_grid_csv(std::ostream& out, const Grid<T>& grid, Fmt fmt) {
  for (std::size_t c = 0; c < grid.shape.width; ++c) {
    out << (c ? "," : "") << 'c' << c;
  }
  out << '\n';
  for (std::size_t r = 0; r < grid.shape.height; ++r) {
    for (std::size_t c = 0; c < grid.shape.width; ++c) {
      out << (c ? "," : "") << fmt(grid[{r, c}]);
    }
    out << '\n';
  }
}

void row(std::ostream& out, std::string_view key, const std::string& value) {
  out << key << ',' << value << '\n';
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_tokens_csv(std::ostream& out, const TokenGrid& tokens) {
  write_grid_csv(out, tokens, [](TokenId t) { return std::to_string(t); });
}

void write_entropy_csv(std::ostream& out, const EntropyMap& entropy) {
  write_grid_csv(out, entropy, format_double);
}

void write_entropy_pgm(std::ostream& out, const EntropyMap& entropy, std::size_t vocab_size) {
  const double max_entropy = std::log(static_cast<double>(vocab_size));
  out << "P2\n" << entropy.shape.width << ' ' << entropy.shape.height << "\n255\n";
  for (std::size_t r = 0; r < entropy.shape.height; ++r) {
    for (std::size_t c = 0; c < entropy.shape.width; ++c) {
      const double level = std::round(255.0 * entropy[{r, c}] / max_entropy);
      out << (c ? " " : "") << static_cast<int>(std::clamp(level, 0.0, 255.0));
    }
    out << '\n';
  }
}

void write_report_csv(std::ostream& out, const RunReport& report) {
  out << "metric,value\n";
  row(out, "mode", std::string(to_string(report.mode)));
  row(out, "seed", std::to_string(report.seed));
  row(out, "tokens_emitted", std::to_string(report.tokens_emitted));
  row(out, "model_invocations", std::to_string(report.model_invocations));
  row(out, "entropy_mean", format_double(report.entropy_mean));
  row(out, "entropy_variance", format_double(report.entropy_variance));
  row(out, "temperature_mean", format_double(report.temperature_mean));
  if (report.spec) {
    const SpecStats& s = *report.spec;
    row(out, "drafts_verified", std::to_string(s.drafts_verified));
    row(out, "drafts_accepted", std::to_string(s.drafts_accepted));
    row(out, "residual_resamples", std::to_string(s.residual_resamples));
    row(out, "fresh_samples", std::to_string(s.fresh_samples));
    row(out, "acceptance_rate", format_double(s.mean_acceptance_rate));
    const double per_iter = s.model_invocations == 0
                                ? 0.0
                                : static_cast<double>(s.tokens_emitted) /
                                      static_cast<double>(s.model_invocations);
    row(out, "tokens_per_invocation", format_double(per_iter));
  }
  if (!report.scale_mean_entropy.empty()) {
    row(out, "scales", std::to_string(report.scale_mean_entropy.size()));
  }
}

void write_histogram_csv(std::ostream& out, const RunReport& report) {
  out << "bin_low,bin_high,count\n";
  for (std::size_t b = 0; b < report.entropy_histogram.size(); ++b) {
    out << b << ',' << b + 1 << ',' << report.entropy_histogram[b] << '\n';
  }
}

void write_scales_csv(std::ostream& out, const RunReport& report) {
  out << "scale,mean_entropy,mean_temperature\n";
  for (std::size_t s = 0; s < report.scale_mean_entropy.size(); ++s) {
    out << s + 1 << ',' << format_double(report.scale_mean_entropy[s]) << ','
        << format_double(report.scale_mean_temperature[s]) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::string_view parameter,
                     std::span<const SweepRow> rows) {
  out << parameter
      << ",entropy_mean,entropy_variance,temperature_mean,model_invocations,acceptance_rate\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.value) << ',' << format_double(r.report.entropy_mean) << ','
        << format_double(r.report.entropy_variance) << ','
        << format_double(r.report.temperature_mean) << ',' << r.report.model_invocations << ',';
    // Acceptance only exists for speculative modes.
    if (r.report.spec) out << format_double(r.report.spec->mean_acceptance_rate);
    out << '\n';
  }
}

void write_entropy_artifacts(const std::filesystem::path& dir, const RunConfig& config,
                             const RunOutput& output) {
  std::filesystem::create_directories(dir);
  auto csv = open_for_write(dir / "entropy.csv");
  write_entropy_csv(csv, output.entropy);
  auto pgm = open_for_write(dir / "entropy.pgm");
  write_entropy_pgm(pgm, output.entropy, config.vocab_size);
}

void write_run_artifacts(const std::filesystem::path& dir, const RunConfig& config,
                         const RunOutput& output) {
  write_entropy_artifacts(dir, config, output);
  auto tokens = open_for_write(dir / "tokens.csv");
  write_tokens_csv(tokens, output.tokens);
  auto report = open_for_write(dir / "report.csv");
  write_report_csv(report, output.report);
  auto hist = open_for_write(dir / "histogram.csv");
  write_histogram_csv(hist, output.report);
  if (!output.report.scale_mean_entropy.empty()) {
    auto scales = open_for_write(dir / "scales.csv");
    write_scales_csv(scales, output.report);
  }
  auto timing = open_for_write(dir / "timing.csv");
  timing << "metric,value\nwall_time_ms," << format_double(output.report.wall_time_ms) << '\n';
}

}  // namespace entropix::harness
