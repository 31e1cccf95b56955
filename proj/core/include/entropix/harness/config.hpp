#pragma once

// Run configuration for the command-line harness.
//
// Format: UTF-8 text, one `key = value` per line, `#` starts a comment, no
// sections. Unknown keys and malformed values are parse errors; values that
// parse but violate a parameter contract are parameter errors.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "entropix/scale_decode.hpp"
#include "entropix/spec_decode.hpp"
#include "entropix/temperature.hpp"
#include "entropix/toy_model.hpp"

namespace entropix::harness {

enum class Mode { kNextToken, kMask, kScale, kSpecBaseline, kSpecEntropy };

std::string_view to_string(Mode mode);

// Malformed input. Carries the 1-based line number, 0 when not line-bound.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// Well-formed but invalid parameter values.
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  Mode mode = Mode::kNextToken;
  std::uint64_t seed = 1;

  // Toy oracle.
  std::size_t vocab_size = 64;
  GridShape shape{16, 16};
  std::uint64_t oracle_seed = 7;
  double context_sensitivity = 0.15;
  double background_kappa = 0.9;
  double foreground_kappa = 0.1;
  // Unset means the centred half-size rectangle; `rect = none` disables it.
  std::optional<Rect> rect;
  bool rect_disabled = false;

  TempParams temp = preset("llamagen");
  SamplingOptions sampling;

  // mask
  std::size_t steps = 16;
  // spec / next-token; 0 means the whole grid
  std::size_t length = 0;
  std::size_t window = 16;
  SpecAcceptParams accept;

  // scale
  double beta = 0.3;
  std::vector<std::size_t> scales{1, 2, 4, 8, 16};
  double floor_temperature = 0.05;

  std::filesystem::path output_dir = "out";

  std::size_t effective_length() const { return length == 0 ? shape.size() : length; }
  Rect effective_rect() const;
};

RunConfig parse_config(std::string_view text);
// Throws std::runtime_error when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

// Applies one setting; throws ConfigError for unknown keys or bad syntax.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value, int line = 0);

// Throws ParamError when a parameter used by config.mode is invalid.
void validate(const RunConfig& config);

OracleConfig oracle_config(const RunConfig& config);

}  // namespace entropix::harness
