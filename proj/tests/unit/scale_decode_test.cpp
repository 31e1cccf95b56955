#include <cmath>

#include "doctest.h"
#include "entropix/scale_decode.hpp"
#include "entropix/toy_model.hpp"

using namespace entropix;

namespace {

ToyOracle scale_oracle() {
  OracleConfig c;
  c.shape = {4, 4};
  c.profile = profile_rect(c.shape, 0.9, 0.2, Rect{1, 1, 2, 2});
  c.seed = 21;
  c.context_sensitivity = 0.3;
  return ToyOracle(c);
}

}  // namespace

TEST_CASE("scale temperature") {
  const ScaleTempParams p{0.3, 15, 0.05};
  CHECK(scale_temperature(1.0, 7, p) == 1.0);
  CHECK(scale_temperature(1.0, 8, p) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(scale_temperature(1.0, 15, p) == 0.05);
  CHECK(scale_temperature(2.0, 1, p) == doctest::Approx(2.0 * (1 + 0.3 * 6)).epsilon(1e-15));
  CHECK_THROWS_AS(scale_temperature(1.0, 0, p), std::out_of_range);
  CHECK_THROWS_AS(scale_temperature(1.0, 16, p), std::out_of_range);
  CHECK_THROWS_AS(scale_temperature(0.0, 3, p), std::invalid_argument);
  CHECK_THROWS_AS(scale_temperature(1.0, 1, ScaleTempParams{-0.1, 3, 0.05}),
                  std::invalid_argument);

  // Midpoint identity for any ladder length.
  for (std::size_t s_count = 2; s_count <= 20; ++s_count) {
    const ScaleTempParams q{0.3, s_count, 0.05};
    CHECK(scale_temperature(1.3, s_count / 2, q) == 1.3);
  }
}

TEST_CASE("scale temperature is positive and monotone") {
  for (double beta : {0.0, 0.1, 0.3, 0.9}) {
    for (std::size_t n = 1; n <= 16; ++n) {
      const ScaleTempParams p{beta, n, 0.05};
      double prev = 1e9;
      for (std::size_t s = 1; s <= n; ++s) {
        const double t = scale_temperature(1.0, s, p);
        CHECK(t > 0.0);
        CHECK(t <= prev);
        prev = t;
      }
    }
  }
}

TEST_CASE("scale_generate with a single scale is parallel entropy-aware sampling") {
  const auto oracle = scale_oracle();
  const auto ladder = square_ladder(std::vector<std::size_t>{4});
  const TempParams temp = preset("star");
  const RngStream rng(3);
  const auto r = scale_generate(oracle, ladder, temp, ScaleTempParams{0.0, 1, 0.05}, {}, rng);
  REQUIRE(r.scales.size() == 1);
  // Reference: every position sampled independently with plain dynamic T.
  for (std::size_t i = 0; i < 16; ++i) {
    const auto logits = oracle.scale_logits_at({}, {4, 4}, position_of({4, 4}, i));
    RngStream draw = rng.derive({0x5343414C45, 0, i});
    const auto t = sample_entropy_aware(logits, std::nullopt, {}, temp, draw);
    CHECK(r.scales[0].cells[i] == t.token);
    CHECK(r.entropy[0].cells[i] == t.entropy);
  }
  // beta > 0 at S = 1 scales the temperature by (1 - beta).
  const auto hot = scale_generate(oracle, ladder, temp, ScaleTempParams{0.3, 1, 0.05}, {}, rng);
  CHECK(hot.mean_temperature[0] == doctest::Approx(0.7 * r.mean_temperature[0]).epsilon(1e-12));
}

TEST_CASE("beta = 0 applies plain dynamic temperature at every scale") {
  const auto oracle = scale_oracle();
  const auto ladder = square_ladder(std::vector<std::size_t>{1, 2, 4});
  const TempParams temp = preset("star");
  const auto r = scale_generate(oracle, ladder, temp, ScaleTempParams{0.0, 3, 0.05}, {},
                                RngStream(8));
  for (std::size_t s = 0; s < 3; ++s) {
    double mean_t = 0.0;
    for (double e : r.entropy[s].cells) mean_t += dynamic_temperature(e, temp);
    mean_t /= static_cast<double>(r.entropy[s].cells.size());
    CHECK(r.mean_temperature[s] == doctest::Approx(mean_t).epsilon(1e-12));
  }
}

// Regression snapshot.
TEST_CASE("scale_generate golden grids") {
  const auto oracle = scale_oracle();
  const auto ladder = square_ladder(std::vector<std::size_t>{1, 2, 4});
  const auto r = scale_generate(oracle, ladder, preset("star"), ScaleTempParams{0.3, 3, 0.05}, {},
                                RngStream(77));
  REQUIRE(r.scales.size() == 3);
  CHECK(r.scales[0].shape == GridShape{1, 1});
  CHECK(r.scales[2].shape == GridShape{4, 4});
  CHECK(r.model_invocations == 3);
  CHECK(r.scales[0].cells == std::vector<TokenId>{55});
  CHECK(r.scales[1].cells == std::vector<TokenId>{14, 32, 61, 16});
  CHECK(r.scales[2].cells ==
        std::vector<TokenId>{48, 4, 31, 52, 46, 62, 27, 61, 1, 11, 21, 2, 18, 61, 4, 37});
  CHECK(r.mean_entropy.size() == 3);
}

TEST_CASE("earlier scales are not modified by later ones") {
  const auto oracle = scale_oracle();
  const auto two = scale_generate(oracle, square_ladder(std::vector<std::size_t>{1, 2}),
                                  preset("star"), ScaleTempParams{0.3, 2, 0.05}, {}, RngStream(5));
  const auto three =
      scale_generate(oracle, square_ladder(std::vector<std::size_t>{1, 2, 4}), preset("star"),
                     ScaleTempParams{0.3, 3, 0.05}, {}, RngStream(5));
  CHECK(three.scales[0] == two.scales[0]);
}

TEST_CASE("scale_generate argument checks") {
  const auto oracle = scale_oracle();
  CHECK_THROWS_AS(scale_generate(oracle, {}, preset("star"), ScaleTempParams{0.3, 1, 0.05}, {},
                                 RngStream(1)),
                  std::invalid_argument);
  const auto ladder = square_ladder(std::vector<std::size_t>{2, 1});
  CHECK_THROWS_AS(scale_generate(oracle, ladder, preset("star"), ScaleTempParams{0.3, 2, 0.05},
                                 {}, RngStream(1)),
                  std::invalid_argument);
}
