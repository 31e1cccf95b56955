#include "entropix/mask_decode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace entropix {
namespace {

enum StreamKey : std::uint64_t { kSample = 0x4D41534B01, kGumbel = 0x4D41534B02 };

}  // namespace

MaskState MaskState::initial(GridShape shape, std::size_t total_steps, TokenId mask_token) {
  MaskState s;
  s.accepted = Grid<bool>(shape, false);
  s.tokens = TokenGrid(shape, mask_token);
  s.total_steps = total_steps;
  return s;
}

std::size_t MaskState::accepted_count() const {
  return static_cast<std::size_t>(std::count(accepted.cells.begin(), accepted.cells.end(), true));
}

void StepSchedule::validate() const {
  if (counts.empty()) throw std::invalid_argument("schedule has no steps");
  std::size_t sum = 0;
  for (std::size_t k : counts) {
    if (k < 1) throw std::invalid_argument("schedule step accepts no tokens");
    sum += k;
  }
  if (sum != total_tokens) throw std::invalid_argument("schedule does not cover all tokens");
}

double confidence_with_noise(double p_sampled, double temperature, double gumbel) {
  if (!(p_sampled > 0.0 && p_sampled <= 1.0)) {
    throw std::invalid_argument("confidence requires p in (0, 1]");
  }
  if (!(temperature > 0.0)) throw std::invalid_argument("nonpositive temperature");
  return std::log(p_sampled) + temperature * gumbel;
}

double confidence(double p_sampled, double temperature, RngStream& rng) {
  return confidence_with_noise(p_sampled, temperature, gumbel_noise(rng));
}

MaskState update_mask(const Grid<double>& conf, const MaskState& state, std::size_t k,
                      const TokenGrid& sampled) {
  if (conf.shape != state.accepted.shape || sampled.shape != state.accepted.shape) {
    throw std::invalid_argument("update_mask: grid shape mismatch");
  }
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < state.accepted.cells.size(); ++i) {
    if (!state.accepted.cells[i]) open.push_back(i);
  }
  if (k > open.size()) {
    throw std::invalid_argument("update_mask: k exceeds remaining positions");
  }
  std::stable_sort(open.begin(), open.end(),
                   [&](std::size_t a, std::size_t b) { return conf.cells[a] > conf.cells[b]; });
  MaskState next = state;
  for (std::size_t r = 0; r < k; ++r) {
    next.accepted.cells[open[r]] = true;
    next.tokens.cells[open[r]] = sampled.cells[open[r]];
  }
  next.step = state.step + 1;
  return next;
}

StepSchedule cosine_schedule(std::size_t total_tokens, std::size_t total_steps) {
  if (total_steps < 1) throw std::invalid_argument("schedule needs at least one step");
  if (total_steps > total_tokens) {
    throw std::invalid_argument("more steps than tokens");
  }
  StepSchedule s;
  s.total_tokens = total_tokens;
  s.counts.resize(total_steps);
  const double n = static_cast<double>(total_tokens);
  std::size_t previous = 0;
  for (std::size_t t = 1; t <= total_steps; ++t) {
    const double frac = static_cast<double>(t) / static_cast<double>(total_steps);
    std::size_t cumulative =
        t == total_steps
            ? total_tokens
            : static_cast<std::size_t>(std::llround(n * (1.0 - std::cos(std::numbers::pi / 2 * frac))));
    cumulative = std::clamp(cumulative, previous, total_tokens);
    s.counts[t - 1] = cumulative - previous;
    previous = cumulative;
  }
  for (auto& k : s.counts) {
    if (k == 0) {
      auto largest = std::max_element(s.counts.begin(), s.counts.end());
      --*largest;
      k = 1;
    }
  }
  std::sort(s.counts.begin(), s.counts.end());
  return s;
}

MaskDecodeResult mask_generate(const LogitsOracle& model, const StepSchedule& schedule,
                               const TempParams& params, const SamplingOptions& options,
                               const RngStream& rng) {
  const GridShape shape = model.shape();
  schedule.validate();
  if (schedule.total_tokens != shape.size()) {
    throw std::invalid_argument("schedule does not match grid size");
  }
  params.validate();
  options.validate();

  MaskDecodeResult result;
  result.entropy = EntropyMap(shape, 0.0);
  result.temperature = Grid<double>(shape, 0.0);
  MaskState state = MaskState::initial(shape, schedule.total_steps(), model.mask_token());

  Grid<double> conf(shape, 0.0);
  TokenGrid sampled(shape, model.mask_token());
  std::vector<SampleTrace> traces(shape.size());

  for (std::size_t step = 0; step < schedule.total_steps(); ++step) {
    ++result.model_invocations;
    // Every open position reads the same frozen context.
    const std::vector<TokenId>& context = state.tokens.cells;
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (state.accepted.cells[i]) continue;
      const Position pos = position_of(shape, i);
      const TokenDistribution cond = model.logits_at(context, pos);
      std::optional<TokenDistribution> uncond;
      if (options.cfg_scale != 1.0) uncond = model.unconditional_logits_at(context, pos);
      RngStream sample_rng = rng.derive({kSample, step, i});
      traces[i] = sample_entropy_aware(cond, uncond, options, params, sample_rng, step);
      sampled.cells[i] = traces[i].token;
      RngStream gumbel_rng = rng.derive({kGumbel, step, i});
      conf.cells[i] = confidence(traces[i].probability, traces[i].temperature, gumbel_rng);
    }
    MaskState next = update_mask(conf, state, schedule.counts[step], sampled);
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (next.accepted.cells[i] && !state.accepted.cells[i]) {
        result.entropy.cells[i] = traces[i].entropy;
        result.temperature.cells[i] = traces[i].temperature;
      }
    }
    state = std::move(next);
    result.history.push_back(state);
  }
  result.tokens = state.tokens;
  return result;
}

}  // namespace entropix
