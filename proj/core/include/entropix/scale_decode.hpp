#pragma once

// Coarse-to-fine decoding with a per-scale temperature factor.

#include <cstddef>
#include <vector>

#include "entropix/grid.hpp"
#include "entropix/oracle.hpp"
#include "entropix/temperature.hpp"

namespace entropix {

struct ScaleTempParams {
  double beta = 0.3;
  std::size_t num_scales = 1;
  double floor_temperature = 0.05;

  void validate() const;
};

// max(T * [1 - beta * (s - floor(S/2))], floor_temperature), s in 1..S.
double scale_temperature(double temperature, std::size_t scale, const ScaleTempParams& params);

// Square ladder helper: {1x1, 2x2, 4x4} from {1, 2, 4}.
std::vector<GridShape> square_ladder(std::span<const std::size_t> sides);

struct ScaleDecodeResult {
  std::vector<TokenGrid> scales;
  std::vector<EntropyMap> entropy;
  std::vector<double> mean_entropy;
  std::vector<double> mean_temperature;  // applied, after the scale factor
  std::size_t model_invocations = 0;
};

// `params.num_scales` must equal ladder.size().
ScaleDecodeResult scale_generate(const ScaleOracle& model, std::span<const GridShape> ladder,
                                 const TempParams& temp, const ScaleTempParams& params,
                                 const SamplingOptions& options, const RngStream& rng);

}  // namespace entropix
