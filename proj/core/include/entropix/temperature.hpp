#pragma once

// Entropy-driven sampling temperature and the per-token sampling pipeline.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "entropix/distribution.hpp"

namespace entropix {

// T(eps) = t0 * exp(-eps / alpha) + theta.
//
// t0 is the amplitude added on top of the floor at zero entropy, alpha the
// entropy decay scale in nats and theta the floor the temperature approaches
// as entropy grows. Confident (low-entropy) positions get the hottest
// temperature; uncertain ones are sampled closer to theta.
struct TempParams {
  double t0 = 2.5;
  double alpha = 3.0;
  double theta = 0.6;

  void validate() const;
  bool operator==(const TempParams&) const = default;
};

double dynamic_temperature(double entropy_nats, const TempParams& params);

// Published per-model settings: "llamagen", "lumina-mgpt", "meissonic", "star".
TempParams preset(std::string_view model_name);
std::span<const std::string_view> preset_names();

struct SamplingOptions {
  double cfg_scale = 1.0;
  std::optional<std::size_t> top_k;
  std::optional<double> top_p;

  void validate() const;
};

struct SampleTrace {
  TokenId token = 0;
  // Entropy of the guided, untruncated distribution.
  double entropy = 0.0;
  double temperature = 1.0;
  // Probability of `token` under the final (tempered, filtered) distribution.
  double probability = 1.0;
  std::size_t step = 0;

  bool operator==(const SampleTrace&) const = default;
};

// cfg_combine when an unconditional branch is given and scale != 1.
TokenDistribution guided_logits(const TokenDistribution& cond,
                                const std::optional<TokenDistribution>& uncond, double cfg_scale);

// Entropy of softmax(logits), clamped at 0 from below.
double logits_entropy(const TokenDistribution& logits);

// rescale -> top-k -> top-p -> softmax.
Probabilities tempered_distribution(const TokenDistribution& guided, double temperature,
                                    const SamplingOptions& options);

// Full pipeline: guidance, entropy read, dynamic temperature, tempered
// distribution, inverse-CDF draw from `rng`.
SampleTrace sample_entropy_aware(const TokenDistribution& cond,
                                 const std::optional<TokenDistribution>& uncond,
                                 const SamplingOptions& options, const TempParams& params,
                                 RngStream& rng, std::size_t step = 0);

}  // namespace entropix
