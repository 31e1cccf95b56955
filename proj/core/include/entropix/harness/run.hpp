#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entropix/grid.hpp"
#include "entropix/harness/config.hpp"
#include "entropix/spec_decode.hpp"

namespace entropix::harness {

struct RunReport {
  Mode mode = Mode::kNextToken;
  std::uint64_t seed = 0;
  std::size_t tokens_emitted = 0;
  std::size_t model_invocations = 0;
  double wall_time_ms = 0.0;
  double entropy_mean = 0.0;
  double entropy_variance = 0.0;
  double temperature_mean = 0.0;
  // Counts of emitted-position entropies in 1-nat bins [0,1), [1,2), ...
  std::vector<std::size_t> entropy_histogram;
  std::optional<SpecStats> spec;
  std::vector<double> scale_mean_entropy;
  std::vector<double> scale_mean_temperature;
};

struct RunOutput {
  // Output-resolution grid; cells never emitted hold -1.
  TokenGrid tokens;
  EntropyMap entropy;
  RunReport report;
};

// Seed override from ENTROPIX_SEED, if set and numeric.
std::optional<std::uint64_t> seed_from_environment();

// Validates and runs one decode against the toy oracle.
RunOutput execute(const RunConfig& config);

inline constexpr std::string_view kSweepParameters[] = {"T0", "K", "alpha", "cfg_scale",
                                                        "e",  "beta", "lambda", "theta"};

struct SweepRow {
  double value = 0.0;
  RunReport report;
};

// Runs `config` once per value with `parameter` overridden. Throws ParamError
// for an unknown parameter, an empty value list or an invalid value.
std::vector<SweepRow> sweep(const RunConfig& config, std::string_view parameter,
                            std::span<const double> values);

std::vector<double> parse_value_list(std::string_view csv);

}  // namespace entropix::harness
