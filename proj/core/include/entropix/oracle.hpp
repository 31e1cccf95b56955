#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "entropix/distribution.hpp"
#include "entropix/grid.hpp"

namespace entropix {

// A model that predicts logits for one grid position given context tokens.
//
// `context` is a row-major token list over shape(). It may be shorter than
// the grid: missing entries, and entries equal to mask_token(), are unknown.
// A raster prefix is therefore just a context of length i.
class LogitsOracle {
 public:
  virtual ~LogitsOracle() = default;

  virtual std::size_t vocab_size() const = 0;
  virtual GridShape shape() const = 0;
  // Reserved id one past the vocabulary; never emitted.
  TokenId mask_token() const { return static_cast<TokenId>(vocab_size()); }

  virtual TokenDistribution logits_at(std::span<const TokenId> context, Position pos) const = 0;

  // Prompt-free branch for classifier-free guidance, if the model has one.
  virtual std::optional<TokenDistribution> unconditional_logits_at(std::span<const TokenId>,
                                                                   Position) const {
    return std::nullopt;
  }
};

// A coarse-to-fine model: logits for a position of the current scale given
// every completed coarser scale.
class ScaleOracle {
 public:
  virtual ~ScaleOracle() = default;

  virtual std::size_t vocab_size() const = 0;
  virtual TokenDistribution scale_logits_at(std::span<const TokenGrid> coarser,
                                            GridShape scale_shape, Position pos) const = 0;
};

}  // namespace entropix
