#include "entropix/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace entropix {
namespace {

constexpr double kSumTolerance = 1e-9;
// Slack on the cumulative-mass comparison in top-p so that probabilities
// reconstructed from logits (0.6 -> 0.59999999999999998) still hit the mark.
constexpr double kMassSlack = 1e-12;

// Indices sorted by descending value, lower index first on ties.
std::vector<std::size_t> rank_descending(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

}  // namespace

TokenDistribution::TokenDistribution(std::vector<double> logits) : logits_(std::move(logits)) {
  if (logits_.size() < 2) {
    throw std::invalid_argument("vocabulary size must be at least 2");
  }
  for (double x : logits_) {
    if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("logits must be finite or excluded");
    }
  }
}

std::size_t TokenDistribution::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(logits_.begin(), logits_.end(), [](double x) { return x != kExcluded; }));
}

TokenDistribution from_probabilities(std::span<const double> probs) {
  validate_probabilities(probs);
  std::vector<double> logits(probs.size());
  std::transform(probs.begin(), probs.end(), logits.begin(),
                 [](double p) { return p > 0.0 ? std::log(p) : kExcluded; });
  return TokenDistribution(std::move(logits));
}

void validate_probabilities(std::span<const double> probs) {
  if (probs.empty()) {
    throw std::invalid_argument("invalid distribution: empty");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("invalid distribution: entry outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("invalid distribution: sum " + std::to_string(sum));
  }
}

Probabilities softmax(const TokenDistribution& d) {
  const auto logits = d.logits();
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  if (max_logit == kExcluded) {
    throw std::invalid_argument("empty support");
  }
  Probabilities probs(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = d.excluded(i) ? 0.0 : std::exp(logits[i] - max_logit);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

double entropy(std::span<const double> probs) {
  validate_probabilities(probs);
  // Neumaier-compensated sum; V reaches 16384 in practice.
  double sum = 0.0;
  double carry = 0.0;
  for (double p : probs) {
    if (p <= 0.0) continue;
    const double term = -p * std::log(p);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      carry += (sum - t) + term;
    } else {
      carry += (term - t) + sum;
    }
    sum = t;
  }
  const double h = sum + carry;
  return std::clamp(h, 0.0, std::log(static_cast<double>(probs.size())));
}

TokenDistribution rescale_logits(const TokenDistribution& d, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("nonpositive temperature");
  }
  std::vector<double> out(d.logits().begin(), d.logits().end());
  for (double& x : out) {
    if (x != kExcluded) x /= temperature;
  }
  return TokenDistribution(std::move(out));
}

TokenDistribution top_k_filter(const TokenDistribution& d, std::size_t k) {
  if (k < 1) {
    throw std::invalid_argument("top-k requires k >= 1");
  }
  if (k >= d.size()) return d;
  const auto order = rank_descending(d.logits());
  std::vector<double> out(d.size(), kExcluded);
  for (std::size_t r = 0; r < k; ++r) {
    out[order[r]] = d[order[r]];
  }
  return TokenDistribution(std::move(out));
}

TokenDistribution top_p_filter(const TokenDistribution& d, double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("top-p requires p in (0, 1]");
  }
  if (p == 1.0) return d;
  const Probabilities probs = softmax(d);
  const auto order = rank_descending(probs);
  std::vector<double> out(d.size(), kExcluded);
  double mass = 0.0;
  for (std::size_t idx : order) {
    out[idx] = d[idx];
    mass += probs[idx];
    if (mass >= p - kMassSlack) break;
  }
  return TokenDistribution(std::move(out));
}

TokenDistribution cfg_combine(const TokenDistribution& cond, const TokenDistribution& uncond,
                              double scale) {
  if (cond.size() != uncond.size()) {
    throw std::invalid_argument("cfg_combine: vocabulary size mismatch");
  }
  if (!(scale >= 1.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("cfg_combine: scale must be >= 1");
  }
  if (cond.support_size() != cond.size() || uncond.support_size() != uncond.size()) {
    throw std::invalid_argument("cfg_combine: inputs must not contain excluded entries");
  }
  if (scale == 1.0) return cond;
  std::vector<double> out(cond.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = uncond[i] + scale * (cond[i] - uncond[i]);
  }
  return TokenDistribution(std::move(out));
}

TokenId inverse_cdf(std::span<const double> probs, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last_positive = i;
    if (u < cumulative) return static_cast<TokenId>(i);
  }
  // Round-off left the total just under u.
  return static_cast<TokenId>(last_positive);
}

TokenId sample_categorical(std::span<const double> probs, RngStream& rng) {
  validate_probabilities(probs);
  return inverse_cdf(probs, rng.next_uniform());
}

double gumbel_from_uniform(double u) {
  const double clamped = std::clamp(u, kGumbelClamp, 1.0 - kGumbelClamp);
  return -std::log(-std::log(clamped));
}

double gumbel_noise(RngStream& rng) { return gumbel_from_uniform(rng.next_uniform()); }

std::size_t argmax(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace entropix
