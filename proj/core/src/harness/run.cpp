#include "entropix/harness/run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>

#include "entropix/mask_decode.hpp"
#include "entropix/scale_decode.hpp"
#include "entropix/toy_model.hpp"

namespace entropix::harness {
namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments(std::span<const double> xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  for (double x : xs) m.variance += (x - m.mean) * (x - m.mean);
  m.variance /= static_cast<double>(xs.size());
  return m;
}

std::vector<std::size_t> histogram(std::span<const double> xs, std::size_t vocab) {
  const auto bins =
      static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(vocab))));
  std::vector<std::size_t> counts(std::max<std::size_t>(bins, 1), 0);
  for (double x : xs) {
    const auto b = std::min(static_cast<std::size_t>(std::max(0.0, x)), counts.size() - 1);
    ++counts[b];
  }
  return counts;
}

void summarize(RunReport& report, std::span<const double> entropies,
               std::span<const double> temperatures, std::size_t vocab) {
  const Moments e = moments(entropies);
  report.entropy_mean = e.mean;
  report.entropy_variance = e.variance;
  report.temperature_mean = moments(temperatures).mean;
  report.entropy_histogram = histogram(entropies, vocab);
}

RunOutput run_sequence(const RunConfig& c, const ToyOracle& oracle, const RngStream& rng) {
  const std::size_t length = c.effective_length();
  SpecDecodeResult r;
  if (c.mode == Mode::kNextToken) {
    r = sequential_decode(oracle, length, c.temp, c.sampling, rng);
  } else {
    SpecAcceptParams accept = c.accept;
    accept.mode =
        c.mode == Mode::kSpecEntropy ? AcceptMode::kEntropyAware : AcceptMode::kBaseline;
    r = jacobi_decode(oracle, length, c.window, c.temp, accept, c.sampling, rng);
  }
  RunOutput out;
  out.tokens = TokenGrid(c.shape, -1);
  std::copy(r.tokens.begin(), r.tokens.end(), out.tokens.cells.begin());
  out.entropy = r.entropy;
  out.report.tokens_emitted = r.stats.tokens_emitted;
  out.report.model_invocations = r.stats.model_invocations;
  if (c.mode != Mode::kNextToken) out.report.spec = r.stats;
  summarize(out.report, std::span(r.entropy.cells).first(length),
            std::span(r.temperature.cells).first(length), c.vocab_size);
  return out;
}

RunOutput run_mask(const RunConfig& c, const ToyOracle& oracle, const RngStream& rng) {
  const StepSchedule schedule = cosine_schedule(c.shape.size(), c.steps);
  MaskDecodeResult r = mask_generate(oracle, schedule, c.temp, c.sampling, rng);
  RunOutput out;
  out.tokens = std::move(r.tokens);
  out.entropy = r.entropy;
  out.report.tokens_emitted = r.history.back().accepted_count();
  out.report.model_invocations = r.model_invocations;
  summarize(out.report, r.entropy.cells, r.temperature.cells, c.vocab_size);
  return out;
}

RunOutput run_scale(const RunConfig& c, const ToyOracle& oracle, const RngStream& rng) {
  const auto ladder = square_ladder(c.scales);
  const ScaleTempParams sp{c.beta, c.scales.size(), c.floor_temperature};
  ScaleDecodeResult r = scale_generate(oracle, ladder, c.temp, sp, c.sampling, rng);
  RunOutput out;
  out.tokens = r.scales.back();
  out.entropy = r.entropy.back();
  std::size_t emitted = 0;
  for (const auto& g : r.scales) emitted += g.cells.size();
  out.report.tokens_emitted = emitted;
  out.report.model_invocations = r.model_invocations;
  out.report.scale_mean_entropy = r.mean_entropy;
  out.report.scale_mean_temperature = r.mean_temperature;
  summarize(out.report, out.entropy.cells, {}, c.vocab_size);
  out.report.temperature_mean = r.mean_temperature.back();
  return out;
}

}  // namespace

std::optional<std::uint64_t> seed_from_environment() {
  const char* raw = std::getenv("ENTROPIX_SEED");
  if (raw == nullptr) return std::nullopt;
  const std::string_view s(raw);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParamError("ENTROPIX_SEED is not an unsigned integer");
  }
  return value;
}

RunOutput execute(const RunConfig& config) {
  validate(config);
  const ToyOracle oracle(oracle_config(config));
  const RngStream rng(config.seed);
  const auto started = std::chrono::steady_clock::now();
  RunOutput out;
  switch (config.mode) {
    case Mode::kNextToken:
    case Mode::kSpecBaseline:
    case Mode::kSpecEntropy:
      out = run_sequence(config, oracle, rng);
      break;
    case Mode::kMask:
      out = run_mask(config, oracle, rng);
      break;
    case Mode::kScale:
      out = run_scale(config, oracle, rng);
      break;
  }
  out.report.wall_time_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - started)
                                .count();
  out.report.mode = config.mode;
  out.report.seed = config.seed;
  return out;
}

std::vector<double> parse_value_list(std::string_view csv) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    auto comma = csv.find(',', pos);
    if (comma == std::string_view::npos) comma = csv.size();
    std::string_view item = csv.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw ParamError("invalid sweep value '" + std::string(item) + "'");
    }
    values.push_back(v);
    pos = comma + 1;
  }
  return values;
}

std::vector<SweepRow> sweep(const RunConfig& config, std::string_view parameter,
                            std::span<const double> values) {
  if (std::find(std::begin(kSweepParameters), std::end(kSweepParameters), parameter) ==
      std::end(kSweepParameters)) {
    throw ParamError("unknown sweep parameter '" + std::string(parameter) + "'");
  }
  if (values.empty()) throw ParamError("sweep needs at least one value");

  std::vector<SweepRow> rows;
  for (double v : values) {
    RunConfig c = config;
    if (parameter == "T0") {
      c.temp.t0 = v;
    } else if (parameter == "alpha") {
      c.temp.alpha = v;
    } else if (parameter == "theta") {
      c.temp.theta = v;
    } else if (parameter == "K") {
      if (v < 1.0 || v != std::floor(v)) throw ParamError("K must be a positive integer");
      c.sampling.top_k = static_cast<std::size_t>(v);
    } else if (parameter == "cfg_scale") {
      c.sampling.cfg_scale = v;
    } else if (parameter == "e") {
      c.accept.e = v;
    } else if (parameter == "lambda") {
      c.accept.lambda = v;
    } else if (parameter == "beta") {
      c.beta = v;
    }
    rows.push_back({v, execute(c).report});
  }
  return rows;
}

}  // namespace entropix::harness
