#include "entropix/spec_decode.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>

namespace entropix {
namespace {

enum StreamKey : std::uint64_t {
  kDraftInit = 0x53504543'00000001,
  kDraft = 0x53504543'00000002,
  kAccept = 0x53504543'00000003,
  kResidual = 0x53504543'00000004,
};

struct Draft {
  TokenId token = 0;
  // Distribution the token was drawn from in the previous iteration.
  std::optional<Probabilities> prev;
};

struct Prediction {
  Probabilities probs;
  double entropy = 0.0;
  double temperature = 1.0;
};

Prediction predict(const LogitsOracle& model, std::span<const TokenId> prefix, std::size_t index,
                   const TempParams& temp, const SamplingOptions& options) {
  const Position pos = position_of(model.shape(), index);
  const auto context = prefix.first(index);
  const TokenDistribution cond = model.logits_at(context, pos);
  std::optional<TokenDistribution> uncond;
  if (options.cfg_scale != 1.0) uncond = model.unconditional_logits_at(context, pos);
  const TokenDistribution guided = guided_logits(cond, uncond, options.cfg_scale);
  Prediction p;
  p.entropy = logits_entropy(guided);
  p.temperature = dynamic_temperature(p.entropy, temp);
  p.probs = tempered_distribution(guided, p.temperature, options);
  return p;
}

void check_length(const LogitsOracle& model, std::size_t length) {
  if (length < 1) throw std::invalid_argument("length must be >= 1");
  if (length > model.shape().size()) {
    throw std::invalid_argument("length exceeds oracle grid size");
  }
}

}  // namespace

void SpecAcceptParams::validate() const {
  if (!(e > 0.0) || !std::isfinite(e)) throw std::invalid_argument("e must be > 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be > 0");
}

double acceptance_ratio(double p_new, double p_old) {
  if (p_new < 0.0 || p_old < 0.0) throw std::invalid_argument("negative probability");
  if (p_old == 0.0) return 0.0;
  return std::min(1.0, p_new / p_old);
}

bool baseline_accept(double p_new, double p_old, double r) {
  return r < acceptance_ratio(p_new, p_old);
}

double entropy_threshold(double eps, double r, const SpecAcceptParams& params) {
  params.validate();
  if (eps < 0.0) throw std::invalid_argument("negative entropy");
  const double decay =
      params.decay == NoiseDecay::kDivisor ? 1.0 - eps / params.lambda : 1.0 - params.lambda * eps;
  const double t = (eps / params.e) * (0.5 + (r - 0.5) * decay);
  return std::clamp(t, 0.0, 1.0);
}

bool entropy_accept(double p_new, double p_old, double eps, double r,
                    const SpecAcceptParams& params) {
  const double ratio = acceptance_ratio(p_new, p_old);
  if (p_old == 0.0) return false;
  return ratio > entropy_threshold(eps, r, params);
}

Probabilities residual_distribution(std::span<const double> new_dist,
                                    std::span<const double> old_dist) {
  if (new_dist.size() != old_dist.size()) {
    throw std::invalid_argument("residual: distribution length mismatch");
  }
  validate_probabilities(new_dist);
  validate_probabilities(old_dist);
  Probabilities residual(new_dist.size());
  double mass = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    residual[i] = std::max(0.0, new_dist[i] - old_dist[i]);
    mass += residual[i];
  }
  if (mass <= 0.0) return Probabilities(new_dist.begin(), new_dist.end());
  for (double& p : residual) p /= mass;
  return residual;
}

TokenId residual_resample(std::span<const double> new_dist, std::span<const double> old_dist,
                          RngStream& rng) {
  const Probabilities residual = residual_distribution(new_dist, old_dist);
  return inverse_cdf(residual, rng.next_uniform());
}

SpecDecodeResult jacobi_decode(const LogitsOracle& model, std::size_t length, std::size_t window,
                               const TempParams& temp, const SpecAcceptParams& accept,
                               const SamplingOptions& options, const RngStream& rng) {
  check_length(model, length);
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  temp.validate();
  accept.validate();
  options.validate();

  const GridShape shape = model.shape();
  const std::size_t vocab = model.vocab_size();
  auto draft_uniform = [&](std::size_t i) { return rng.derive({kDraft, i}).next_uniform(); };

  SpecDecodeResult result;
  result.entropy = EntropyMap(shape, 0.0);
  result.temperature = Grid<double>(shape, 0.0);
  std::vector<TokenId>& emitted = result.tokens;
  emitted.reserve(length);
  SpecStats& stats = result.stats;
  std::deque<Draft> drafts;
  std::vector<TokenId> context;
  std::vector<Prediction> predictions;

  auto emit = [&](TokenId token, const Prediction& p) {
    const std::size_t i = emitted.size();
    emitted.push_back(token);
    result.entropy.cells[i] = p.entropy;
    result.temperature.cells[i] = p.temperature;
  };

  while (emitted.size() < length) {
    while (drafts.size() < window && emitted.size() + drafts.size() < length) {
      const std::size_t i = emitted.size() + drafts.size();
      RngStream init = rng.derive({kDraftInit, i});
      drafts.push_back({static_cast<TokenId>(init.next_u64() % vocab), std::nullopt});
    }

    // One parallel forward over the whole window.
    ++stats.model_invocations;
    const std::size_t start = emitted.size();
    context.assign(emitted.begin(), emitted.end());
    for (const Draft& d : drafts) context.push_back(d.token);
    predictions.clear();
    for (std::size_t k = 0; k < drafts.size(); ++k) {
      predictions.push_back(predict(model, context, start + k, temp, options));
    }

    std::size_t accepted = 0;
    std::size_t stop = drafts.size();
    for (std::size_t k = 0; k < drafts.size(); ++k) {
      const std::size_t i = start + k;
      const Draft& d = drafts[k];
      const Prediction& p = predictions[k];
      if (!d.prev) {
        // No previous iteration to compare against: draw from the new
        // distribution, which is exact because everything before i is final.
        ++stats.fresh_samples;
        emit(inverse_cdf(p.probs, draft_uniform(i)), p);
        stop = k;
        break;
      }
      ++stats.drafts_verified;
      const auto tok = static_cast<std::size_t>(d.token);
      const double p_new = p.probs[tok];
      const double p_old = (*d.prev)[tok];
      const double r = rng.derive({kAccept, i}).next_uniform();
      const bool ok = accept.mode == AcceptMode::kBaseline
                          ? baseline_accept(p_new, p_old, r)
                          : entropy_accept(p_new, p_old, p.entropy, r, accept);
      if (ok) {
        ++accepted;
        emit(d.token, p);
        continue;
      }
      ++stats.residual_resamples;
      RngStream residual = rng.derive({kResidual, i});
      emit(residual_resample(p.probs, *d.prev, residual), p);
      stop = k;
      break;
    }
    stats.drafts_accepted += accepted;
    stats.accepted_per_iteration.push_back(accepted);

    // Survivors are redrawn from this iteration's distributions.
    std::deque<Draft> next;
    for (std::size_t k = stop + 1; k < drafts.size(); ++k) {
      next.push_back({inverse_cdf(predictions[k].probs, draft_uniform(start + k)),
                      std::move(predictions[k].probs)});
    }
    drafts = std::move(next);
  }

  stats.tokens_emitted = emitted.size();
  stats.mean_acceptance_rate =
      stats.drafts_verified == 0
          ? 0.0
          : static_cast<double>(stats.drafts_accepted) / static_cast<double>(stats.drafts_verified);
  return result;
}

SpecDecodeResult sequential_decode(const LogitsOracle& model, std::size_t length,
                                   const TempParams& temp, const SamplingOptions& options,
                                   const RngStream& rng) {
  check_length(model, length);
  const GridShape shape = model.shape();
  SpecDecodeResult result;
  result.entropy = EntropyMap(shape, 0.0);
  result.temperature = Grid<double>(shape, 0.0);
  for (std::size_t i = 0; i < length; ++i) {
    const Position pos = position_of(shape, i);
    const std::span<const TokenId> context = result.tokens;
    const TokenDistribution cond = model.logits_at(context, pos);
    std::optional<TokenDistribution> uncond;
    if (options.cfg_scale != 1.0) uncond = model.unconditional_logits_at(context, pos);
    RngStream draw = rng.derive({kDraft, i});
    const SampleTrace trace = sample_entropy_aware(cond, uncond, options, temp, draw, i);
    result.tokens.push_back(trace.token);
    result.entropy.cells[i] = trace.entropy;
    result.temperature.cells[i] = trace.temperature;
    ++result.stats.model_invocations;
    ++result.stats.fresh_samples;
  }
  result.stats.tokens_emitted = length;
  return result;
}

}  // namespace entropix
