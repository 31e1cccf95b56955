#pragma once

// Deterministic synthetic autoregressive model with a controllable spatial
// entropy profile.
//
// Each position gets a pseudo-random "pattern" in [0, 1] over the vocabulary
// with a single peak of 1 and every other entry in [0, 0.5). Its logits are
// gap(kappa) * pattern, gap(kappa) = kMaxGap * kappa^2, so the concentration
// kappa in [0, 1] moves the position from exactly uniform (kappa = 0) to a
// peak at least 15 nats above the rest (kappa = 1). Entropy of softmax(g * x)
// has derivative -g * Var(x) in g, hence is nonincreasing in kappa.
//
// Context dependence blends a second pattern keyed on a hash of the 3x3
// neighbourhood tokens:  x = (1 - c) * base + c * context_pattern.

#include <cstdint>
#include <span>
#include <vector>

#include "entropix/oracle.hpp"

namespace entropix {

inline constexpr double kMaxGap = 30.0;

struct Rect {
  std::size_t top = 0;
  std::size_t left = 0;
  std::size_t height = 0;
  std::size_t width = 0;
};

struct OracleConfig {
  std::size_t vocab_size = 64;
  GridShape shape{16, 16};
  // Row-major kappa map over `shape`; empty means constant 0.5.
  std::vector<double> profile;
  std::uint64_t seed = 0;
  double context_sensitivity = 0.0;

  void validate() const;
  double kappa_at(Position pos) const;
};

// background_kappa outside `rect`, foreground_kappa inside.
std::vector<double> profile_rect(GridShape shape, double background_kappa,
                                 double foreground_kappa, Rect rect);

// Mixing hash over (token, linear index) pairs:
//   h_0 = 0x84222325CBF29CE4,  h_{n+1} = mix64(h_n ^ mix64(token + 1) ^ (index * 0x9E3779B97F4A7C15))
// with mix64 the SplitMix64 finalizer.
std::uint64_t hash_context(std::span<const std::pair<TokenId, std::size_t>> entries);

TokenDistribution toy_logits_at(const OracleConfig& cfg, std::span<const TokenId> context,
                                Position pos);

class ToyOracle final : public LogitsOracle, public ScaleOracle {
 public:
  explicit ToyOracle(OracleConfig cfg);

  const OracleConfig& config() const { return cfg_; }

  std::size_t vocab_size() const override { return cfg_.vocab_size; }
  GridShape shape() const override { return cfg_.shape; }

  TokenDistribution logits_at(std::span<const TokenId> context, Position pos) const override;

  // Flatter prompt-free pattern: half the gap and an independent peak.
  std::optional<TokenDistribution> unconditional_logits_at(std::span<const TokenId> context,
                                                           Position pos) const override;

  // Kappa is read at the nearest output-resolution position; context is the
  // 3x3 neighbourhood of the parent cell in the immediately coarser scale.
  TokenDistribution scale_logits_at(std::span<const TokenGrid> coarser, GridShape scale_shape,
                                    Position pos) const override;

 private:
  OracleConfig cfg_;
};

}  // namespace entropix
