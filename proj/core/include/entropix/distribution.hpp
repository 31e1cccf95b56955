#pragma once

// Categorical-distribution primitives shared by every decoder: softmax,
// entropy, logit filters, guidance and seeded sampling.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "entropix/grid.hpp"
#include "entropix/rng.hpp"

namespace entropix {

// Logit value for an entry removed by a filter. Softmax maps it to exactly 0.
inline constexpr double kExcluded = -std::numeric_limits<double>::infinity();

using Probabilities = std::vector<double>;

// Unnormalized scores over a vocabulary of size V >= 2. Entries are finite or
// kExcluded; NaN and +inf are rejected at construction.
class TokenDistribution {
 public:
  explicit TokenDistribution(std::vector<double> logits);

  std::size_t size() const { return logits_.size(); }
  std::span<const double> logits() const { return logits_; }
  double operator[](std::size_t i) const { return logits_[i]; }
  bool excluded(std::size_t i) const { return logits_[i] == kExcluded; }
  std::size_t support_size() const;

  bool operator==(const TokenDistribution&) const = default;

 private:
  std::vector<double> logits_;
};

// Builds a distribution whose softmax is `probs` (zeros become excluded).
TokenDistribution from_probabilities(std::span<const double> probs);

// Throws std::invalid_argument("invalid distribution") unless every entry is
// in [0, 1] and the sum is 1 within 1e-9.
void validate_probabilities(std::span<const double> probs);

// Max-subtracted softmax. Throws "empty support" if every entry is excluded.
Probabilities softmax(const TokenDistribution& d);

// Shannon entropy in nats with 0 log 0 = 0, clamped to [0, ln V].
double entropy(std::span<const double> probs);

// Divides every non-excluded logit by `temperature` (> 0).
TokenDistribution rescale_logits(const TokenDistribution& d, double temperature);

// Keeps the k highest logits; ties at the boundary go to the lower index.
TokenDistribution top_k_filter(const TokenDistribution& d, std::size_t k);

// Keeps the smallest descending-probability prefix whose mass reaches p.
TokenDistribution top_p_filter(const TokenDistribution& d, double p);

// uncond + scale * (cond - uncond); scale >= 1.
TokenDistribution cfg_combine(const TokenDistribution& cond, const TokenDistribution& uncond,
                              double scale);

// Inverse-CDF draw scanning indices in ascending order. Consumes one uniform.
TokenId sample_categorical(std::span<const double> probs, RngStream& rng);

// Same as above with an externally supplied uniform in [0, 1).
TokenId inverse_cdf(std::span<const double> probs, double u);

inline constexpr double kGumbelClamp = 1e-12;

// g = -ln(-ln u), u clamped to [1e-12, 1 - 1e-12].
double gumbel_from_uniform(double u);
double gumbel_noise(RngStream& rng);

std::size_t argmax(std::span<const double> values);

}  // namespace entropix
