#pragma once

// Self-speculative (Jacobi) decoding with the plain ratio acceptance rule and
// the entropy-aware variant, plus residual resampling on rejection.

#include <cstddef>
#include <vector>

#include "entropix/grid.hpp"
#include "entropix/oracle.hpp"
#include "entropix/temperature.hpp"

namespace entropix {

enum class AcceptMode { kBaseline, kEntropyAware };

// How the noise-damping factor combines lambda with entropy.
//   kDivisor: (1 - eps / lambda)   bounded and decaying for eps in [0, lambda]
//   kProduct: (1 - lambda * eps)   literal product form
enum class NoiseDecay { kDivisor, kProduct };

struct SpecAcceptParams {
  double e = 8.0;
  double lambda = 16.0;
  AcceptMode mode = AcceptMode::kBaseline;
  NoiseDecay decay = NoiseDecay::kDivisor;

  void validate() const;
};

// min(1, p_new / p_old); 0 when p_old == 0 (degenerate draft, always rejected).
double acceptance_ratio(double p_new, double p_old);

// Accept iff r < min(1, p_new / p_old).
bool baseline_accept(double p_new, double p_old, double r);

// clamp((eps/e) * [0.5 + (r - 0.5) * decay(eps)], 0, 1).
double entropy_threshold(double eps, double r, const SpecAcceptParams& params);

// Accept iff min(1, p_new / p_old) > entropy_threshold(eps, r).
bool entropy_accept(double p_new, double p_old, double eps, double r,
                    const SpecAcceptParams& params);

// Normalized max(0, new - old). Falls back to `new_dist` when the positive
// part is identically zero.
Probabilities residual_distribution(std::span<const double> new_dist,
                                    std::span<const double> old_dist);
TokenId residual_resample(std::span<const double> new_dist, std::span<const double> old_dist,
                          RngStream& rng);

struct SpecStats {
  std::size_t model_invocations = 0;
  std::size_t tokens_emitted = 0;
  // Drafts emitted by acceptance in each iteration.
  std::vector<std::size_t> accepted_per_iteration;
  // Drafts that had a previous-iteration distribution and were tested.
  std::size_t drafts_verified = 0;
  std::size_t drafts_accepted = 0;
  std::size_t residual_resamples = 0;
  std::size_t fresh_samples = 0;
  double mean_acceptance_rate = 0.0;

  bool operator==(const SpecStats&) const = default;
};

struct SpecDecodeResult {
  std::vector<TokenId> tokens;
  SpecStats stats;
  EntropyMap entropy;
  Grid<double> temperature;
};

// Decodes `length` tokens in raster order over model.shape().
//
// Randomness is keyed per position: the draft for position i is always the
// inverse-CDF image of one uniform u_i, the acceptance draw r_i and the
// residual draw are separate per-position streams. Position i is tested at
// most once, so each key is consumed once.
SpecDecodeResult jacobi_decode(const LogitsOracle& model, std::size_t length, std::size_t window,
                               const TempParams& temp, const SpecAcceptParams& accept,
                               const SamplingOptions& options, const RngStream& rng);

// Plain raster next-token decoding with the entropy-aware sampling pipeline,
// drawing position i with the same uniform jacobi_decode uses for u_i.
SpecDecodeResult sequential_decode(const LogitsOracle& model, std::size_t length,
                                   const TempParams& temp, const SamplingOptions& options,
                                   const RngStream& rng);

}  // namespace entropix
