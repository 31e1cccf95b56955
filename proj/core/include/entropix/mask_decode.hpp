#pragma once

// Mask-prediction decoding: every step samples all open positions and
// finalizes the k most confident under Gumbel-perturbed confidence.

#include <cstddef>
#include <span>
#include <vector>

#include "entropix/grid.hpp"
#include "entropix/oracle.hpp"
#include "entropix/temperature.hpp"

namespace entropix {

struct MaskState {
  Grid<bool> accepted;
  TokenGrid tokens;  // valid where accepted
  std::size_t step = 0;
  std::size_t total_steps = 1;

  static MaskState initial(GridShape shape, std::size_t total_steps, TokenId mask_token);
  std::size_t accepted_count() const;
  std::size_t remaining() const { return accepted.cells.size() - accepted_count(); }
};

struct StepSchedule {
  std::size_t total_tokens = 0;
  std::vector<std::size_t> counts;  // tokens accepted at each step

  std::size_t total_steps() const { return counts.size(); }
  void validate() const;
};

// log(p_sampled) + T * g, g ~ Gumbel(0, 1) drawn from `rng`.
double confidence(double p_sampled, double temperature, RngStream& rng);
double confidence_with_noise(double p_sampled, double temperature, double gumbel);

// Accepts the k open positions with highest confidence. Ties are broken in
// row-major order. Accepted positions are left untouched; `sampled` supplies
// the tokens written for newly accepted cells.
MaskState update_mask(const Grid<double>& conf, const MaskState& state, std::size_t k,
                      const TokenGrid& sampled);

// Cumulative accepted fraction after step t is 1 - cos(pi/2 * t/T). Counts
// are rounded, zero steps borrow from the largest, then sorted ascending.
StepSchedule cosine_schedule(std::size_t total_tokens, std::size_t total_steps);

struct MaskDecodeResult {
  TokenGrid tokens;
  // Entropy at each position's acceptance step.
  EntropyMap entropy;
  Grid<double> temperature;
  // State after each step; history.back() is fully accepted.
  std::vector<MaskState> history;
  std::size_t model_invocations = 0;
};

MaskDecodeResult mask_generate(const LogitsOracle& model, const StepSchedule& schedule,
                               const TempParams& params, const SamplingOptions& options,
                               const RngStream& rng);

}  // namespace entropix
