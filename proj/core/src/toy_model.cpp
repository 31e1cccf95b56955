#include "entropix/toy_model.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "entropix/rng.hpp"

namespace entropix {
namespace {

enum Salt : std::uint64_t { kBase = 1, kContext = 2, kUnconditional = 3, kScale = 4 };

// One entry at 1, all others in [0, 0.5).
std::vector<double> pattern(std::uint64_t seed, std::uint64_t salt, std::uint64_t key,
                            std::size_t vocab) {
  RngStream rng = RngStream(seed, salt).derive({key});
  std::vector<double> x(vocab);
  const std::size_t peak = static_cast<std::size_t>(rng.next_u64() % vocab);
  for (std::size_t v = 0; v < vocab; ++v) {
    x[v] = 0.5 * rng.next_uniform();
  }
  x[peak] = 1.0;
  return x;
}

double gap(double kappa) { return kMaxGap * kappa * kappa; }

using Neighbourhood = std::vector<std::pair<TokenId, std::size_t>>;

Neighbourhood neighbourhood(std::span<const TokenId> context, GridShape shape, Position pos,
                            TokenId mask, std::size_t vocab) {
  Neighbourhood out;
  out.reserve(8);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const auto r = static_cast<std::ptrdiff_t>(pos.row) + dr;
      const auto c = static_cast<std::ptrdiff_t>(pos.col) + dc;
      if (r < 0 || c < 0 || r >= static_cast<std::ptrdiff_t>(shape.height) ||
          c >= static_cast<std::ptrdiff_t>(shape.width)) {
        continue;
      }
      const std::size_t idx = linear_index(shape, {static_cast<std::size_t>(r),
                                                   static_cast<std::size_t>(c)});
      const TokenId token = idx < context.size() ? context[idx] : mask;
      if (token < 0 || static_cast<std::size_t>(token) > vocab) {
        throw std::invalid_argument("context token outside vocabulary");
      }
      out.emplace_back(token, idx);
    }
  }
  return out;
}

TokenDistribution blend(const OracleConfig& cfg, double kappa, std::uint64_t base_key,
                        const Neighbourhood& context) {
  std::vector<double> x = pattern(cfg.seed, kBase, base_key, cfg.vocab_size);
  const double c = cfg.context_sensitivity;
  if (c > 0.0) {
    const std::uint64_t ctx = hash_context(context);
    const std::vector<double> y = pattern(cfg.seed, kContext, mix64(base_key ^ ctx),
                                          cfg.vocab_size);
    for (std::size_t v = 0; v < x.size(); ++v) {
      x[v] = (1.0 - c) * x[v] + c * y[v];
    }
  }
  const double g = gap(kappa);
  for (double& v : x) v *= g;
  return TokenDistribution(std::move(x));
}

void check_position(GridShape shape, Position pos) {
  if (pos.row >= shape.height || pos.col >= shape.width) {
    throw std::out_of_range("position outside oracle grid");
  }
}

}  // namespace

void OracleConfig::validate() const {
  if (vocab_size < 2) throw std::invalid_argument("oracle vocabulary must be >= 2");
  if (shape.height < 1 || shape.width < 1) throw std::invalid_argument("oracle grid is empty");
  if (!profile.empty() && profile.size() != shape.size()) {
    throw std::invalid_argument("profile size does not match grid");
  }
  for (double k : profile) {
    if (!(k >= 0.0 && k <= 1.0)) throw std::invalid_argument("kappa must be in [0, 1]");
  }
  if (!(context_sensitivity >= 0.0 && context_sensitivity <= 1.0)) {
    throw std::invalid_argument("context_sensitivity must be in [0, 1]");
  }
}

double OracleConfig::kappa_at(Position pos) const {
  return profile.empty() ? 0.5 : profile[linear_index(shape, pos)];
}

std::vector<double> profile_rect(GridShape shape, double background_kappa,
                                 double foreground_kappa, Rect rect) {
  auto valid = [](double k) { return k >= 0.0 && k <= 1.0; };
  if (!valid(background_kappa) || !valid(foreground_kappa)) {
    throw std::invalid_argument("kappa must be in [0, 1]");
  }
  if (rect.top + rect.height > shape.height || rect.left + rect.width > shape.width) {
    throw std::out_of_range("rectangle exceeds grid");
  }
  std::vector<double> map(shape.size(), background_kappa);
  for (std::size_t r = rect.top; r < rect.top + rect.height; ++r) {
    for (std::size_t c = rect.left; c < rect.left + rect.width; ++c) {
      map[linear_index(shape, {r, c})] = foreground_kappa;
    }
  }
  return map;
}

std::uint64_t hash_context(std::span<const std::pair<TokenId, std::size_t>> entries) {
  std::uint64_t h = 0x84222325CBF29CE4ULL;
  for (const auto& [token, index] : entries) {
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(token) + 1) ^
              (static_cast<std::uint64_t>(index) * 0x9E3779B97F4A7C15ULL));
  }
  return h;
}

TokenDistribution toy_logits_at(const OracleConfig& cfg, std::span<const TokenId> context,
                                Position pos) {
  check_position(cfg.shape, pos);
  const auto mask = static_cast<TokenId>(cfg.vocab_size);
  const Neighbourhood ctx = cfg.context_sensitivity > 0.0
                                ? neighbourhood(context, cfg.shape, pos, mask, cfg.vocab_size)
                                : Neighbourhood{};
  return blend(cfg, cfg.kappa_at(pos), linear_index(cfg.shape, pos), ctx);
}

ToyOracle::ToyOracle(OracleConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

TokenDistribution ToyOracle::logits_at(std::span<const TokenId> context, Position pos) const {
  return toy_logits_at(cfg_, context, pos);
}

std::optional<TokenDistribution> ToyOracle::unconditional_logits_at(std::span<const TokenId>,
                                                                    Position pos) const {
  check_position(cfg_.shape, pos);
  std::vector<double> x =
      pattern(cfg_.seed, kUnconditional, linear_index(cfg_.shape, pos), cfg_.vocab_size);
  const double g = 0.5 * gap(cfg_.kappa_at(pos));
  for (double& v : x) v *= g;
  return TokenDistribution(std::move(x));
}

TokenDistribution ToyOracle::scale_logits_at(std::span<const TokenGrid> coarser,
                                             GridShape scale_shape, Position pos) const {
  check_position(scale_shape, pos);
  const Position fine{(2 * pos.row + 1) * cfg_.shape.height / (2 * scale_shape.height),
                      (2 * pos.col + 1) * cfg_.shape.width / (2 * scale_shape.width)};
  const std::uint64_t key = mix64(kScale ^ mix64(scale_shape.height * 0x10001ULL +
                                                 scale_shape.width)) ^
                            linear_index(scale_shape, pos);
  Neighbourhood ctx;
  if (!coarser.empty() && cfg_.context_sensitivity > 0.0) {
    const TokenGrid& parent = coarser.back();
    const Position anchor{pos.row * parent.shape.height / scale_shape.height,
                          pos.col * parent.shape.width / scale_shape.width};
    ctx = neighbourhood(parent.cells, parent.shape, anchor, mask_token(), cfg_.vocab_size);
    ctx.emplace_back(parent[anchor], linear_index(parent.shape, anchor));
  }
  return blend(cfg_, cfg_.kappa_at(fine), key, ctx);
}

}  // namespace entropix
