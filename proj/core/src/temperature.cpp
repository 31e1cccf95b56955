#include "entropix/temperature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace entropix {
namespace {

struct NamedPreset {
  std::string_view name;
  TempParams params;
};

constexpr std::array<NamedPreset, 4> kPresets{{
    {"llamagen", {2.5, 3.0, 0.6}},
    {"lumina-mgpt", {2.0, 2.5, 0.6}},
    {"meissonic", {2.5, 3.0, 0.7}},
    {"star", {2.5, 3.0, 0.5}},
}};

constexpr std::array<std::string_view, 4> kPresetNames{"llamagen", "lumina-mgpt", "meissonic",
                                                       "star"};

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

void TempParams::validate() const {
  if (!positive_finite(t0) || !positive_finite(alpha) || !positive_finite(theta)) {
    throw std::invalid_argument("temperature parameters T0, alpha, theta must be positive");
  }
}

double dynamic_temperature(double entropy_nats, const TempParams& params) {
  params.validate();
  if (entropy_nats < 0.0 || std::isnan(entropy_nats)) {
    throw std::invalid_argument("negative entropy");
  }
  return params.t0 * std::exp(-entropy_nats / params.alpha) + params.theta;
}

TempParams preset(std::string_view model_name) {
  for (const auto& p : kPresets) {
    if (p.name == model_name) return p.params;
  }
  std::string valid;
  for (auto name : kPresetNames) {
    if (!valid.empty()) valid += ", ";
    valid += name;
  }
  throw std::invalid_argument("unknown preset '" + std::string(model_name) +
                              "' (valid: " + valid + ")");
}

std::span<const std::string_view> preset_names() { return kPresetNames; }

void SamplingOptions::validate() const {
  if (!(cfg_scale >= 1.0) || !std::isfinite(cfg_scale)) {
    throw std::invalid_argument("cfg_scale must be >= 1");
  }
  if (top_k && *top_k < 1) {
    throw std::invalid_argument("top_k must be >= 1");
  }
  if (top_p && !(*top_p > 0.0 && *top_p <= 1.0)) {
    throw std::invalid_argument("top_p must be in (0, 1]");
  }
}

TokenDistribution guided_logits(const TokenDistribution& cond,
                                const std::optional<TokenDistribution>& uncond, double cfg_scale) {
  if (!uncond || cfg_scale == 1.0) return cond;
  return cfg_combine(cond, *uncond, cfg_scale);
}

double logits_entropy(const TokenDistribution& logits) {
  return std::max(0.0, entropy(softmax(logits)));
}

Probabilities tempered_distribution(const TokenDistribution& guided, double temperature,
                                    const SamplingOptions& options) {
  TokenDistribution d = rescale_logits(guided, temperature);
  if (options.top_k) d = top_k_filter(d, *options.top_k);
  if (options.top_p) d = top_p_filter(d, *options.top_p);
  return softmax(d);
}

SampleTrace sample_entropy_aware(const TokenDistribution& cond,
                                 const std::optional<TokenDistribution>& uncond,
                                 const SamplingOptions& options, const TempParams& params,
                                 RngStream& rng, std::size_t step) {
  options.validate();
  const TokenDistribution guided = guided_logits(cond, uncond, options.cfg_scale);
  SampleTrace trace;
  trace.step = step;
  trace.entropy = logits_entropy(guided);
  trace.temperature = dynamic_temperature(trace.entropy, params);
  const Probabilities probs = tempered_distribution(guided, trace.temperature, options);
  trace.token = sample_categorical(probs, rng);
  trace.probability = probs[static_cast<std::size_t>(trace.token)];
  return trace;
}

}  // namespace entropix
