#include "entropix/scale_decode.hpp"

#include <cmath>
#include <stdexcept>

namespace entropix {
namespace {

constexpr std::uint64_t kScaleSample = 0x5343414C45;

}  // namespace

void ScaleTempParams::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be >= 0");
  if (num_scales < 1) throw std::invalid_argument("need at least one scale");
  if (!(floor_temperature > 0.0)) throw std::invalid_argument("floor temperature must be > 0");
}

double scale_temperature(double temperature, std::size_t scale, const ScaleTempParams& params) {
  params.validate();
  if (scale < 1 || scale > params.num_scales) {
    throw std::out_of_range("scale index out of range");
  }
  if (!(temperature > 0.0)) throw std::invalid_argument("nonpositive temperature");
  const double offset =
      static_cast<double>(scale) - static_cast<double>(params.num_scales / 2);
  return std::max(temperature * (1.0 - params.beta * offset), params.floor_temperature);
}

std::vector<GridShape> square_ladder(std::span<const std::size_t> sides) {
  std::vector<GridShape> ladder;
  for (std::size_t s : sides) ladder.push_back({s, s});
  return ladder;
}

ScaleDecodeResult scale_generate(const ScaleOracle& model, std::span<const GridShape> ladder,
                                 const TempParams& temp, const ScaleTempParams& params,
                                 const SamplingOptions& options, const RngStream& rng) {
  if (ladder.empty()) throw std::invalid_argument("empty scale ladder");
  if (params.num_scales != ladder.size()) {
    throw std::invalid_argument("num_scales does not match ladder length");
  }
  params.validate();
  temp.validate();
  options.validate();
  for (std::size_t s = 0; s < ladder.size(); ++s) {
    if (ladder[s].size() == 0) throw std::invalid_argument("empty scale in ladder");
    if (s > 0 && (ladder[s].height < ladder[s - 1].height ||
                  ladder[s].width < ladder[s - 1].width)) {
      throw std::invalid_argument("scale ladder must be nondecreasing");
    }
  }

  ScaleDecodeResult result;
  for (std::size_t s = 0; s < ladder.size(); ++s) {
    const GridShape shape = ladder[s];
    TokenGrid grid(shape, 0);
    EntropyMap emap(shape, 0.0);
    double temp_sum = 0.0;
    ++result.model_invocations;
    for (std::size_t i = 0; i < shape.size(); ++i) {
      const Position pos = position_of(shape, i);
      const TokenDistribution guided = model.scale_logits_at(result.scales, shape, pos);
      const double eps = logits_entropy(guided);
      const double t = scale_temperature(dynamic_temperature(eps, temp), s + 1, params);
      const Probabilities probs = tempered_distribution(guided, t, options);
      RngStream draw = rng.derive({kScaleSample, s, i});
      grid.cells[i] = sample_categorical(probs, draw);
      emap.cells[i] = eps;
      temp_sum += t;
    }
    double mean = 0.0;
    for (double e : emap.cells) mean += e;
    result.mean_entropy.push_back(mean / static_cast<double>(shape.size()));
    result.mean_temperature.push_back(temp_sum / static_cast<double>(shape.size()));
    result.scales.push_back(std::move(grid));
    result.entropy.push_back(std::move(emap));
  }
  return result;
}

}  // namespace entropix
