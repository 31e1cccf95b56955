#include <cmath>
#include <string>

#include "doctest.h"
#include "entropix/temperature.hpp"
#include "reference.hpp"

using namespace entropix;

TEST_CASE("dynamic temperature at the llamagen setting") {
  const TempParams p = preset("llamagen");
  CHECK(dynamic_temperature(0.0, p) == doctest::Approx(3.1).epsilon(1e-15));
  // 2.5 / e + 0.6 at 30 digits.
  CHECK(dynamic_temperature(3.0, p) == doctest::Approx(1.5196986029286058).epsilon(1e-14));
  CHECK(std::abs(dynamic_temperature(50.0, p) - 0.6) < 1e-6);
  CHECK_THROWS_WITH(dynamic_temperature(-0.1, p), "negative entropy");
  CHECK_THROWS_AS(dynamic_temperature(1.0, TempParams{0.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(dynamic_temperature(1.0, TempParams{1.0, -1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("presets carry the published triples") {
  CHECK(preset("llamagen") == TempParams{2.5, 3.0, 0.6});
  CHECK(preset("lumina-mgpt") == TempParams{2.0, 2.5, 0.6});
  CHECK(preset("meissonic") == TempParams{2.5, 3.0, 0.7});
  CHECK(preset("star") == TempParams{2.5, 3.0, 0.5});
  CHECK(preset_names().size() == 4);
  CHECK_THROWS_WITH(preset("gpt-4"), doctest::Contains("unknown preset"));
  CHECK_THROWS_WITH(preset("gpt-4"), doctest::Contains("lumina-mgpt"));
}

TEST_CASE("temperature is strictly decreasing and bounded") {
  RngStream rng(8);
  for (auto name : preset_names()) {
    const TempParams p = preset(name);
    for (int i = 0; i < 1000; ++i) {
      double a = 10.0 * rng.next_uniform();
      double b = 10.0 * rng.next_uniform();
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      const double ta = dynamic_temperature(a, p);
      CHECK(ta > dynamic_temperature(b, p));
      CHECK(ta > p.theta);
      CHECK(ta <= p.t0 + p.theta);
    }
  }
}

TEST_CASE("sample_entropy_aware on a uniform 16384-way distribution") {
  const TokenDistribution uniform(std::vector<double>(16384, 0.0));
  RngStream rng(1);
  const SampleTrace t = sample_entropy_aware(uniform, std::nullopt, {}, preset("llamagen"), rng, 7);
  CHECK(t.entropy == doctest::Approx(9.704060527839234).epsilon(1e-12));
  // 2.5 * exp(-ln(16384) / 3) + 0.6 at 30 digits.
  CHECK(t.temperature == doctest::Approx(0.69843133202303694).epsilon(1e-12));
  CHECK(t.step == 7);
  CHECK(t.probability == doctest::Approx(1.0 / 16384));
}

TEST_CASE("a dominant logit survives the hottest temperature") {
  std::vector<double> logits(64, 0.0);
  logits[17] = 30.0;
  const TokenDistribution d(logits);
  const TempParams p = preset("llamagen");
  RngStream rng(3);
  int hits = 0;
  SampleTrace t;
  for (int i = 0; i < 10000; ++i) {
    t = sample_entropy_aware(d, std::nullopt, {}, p, rng);
    hits += t.token == 17;
  }
  CHECK(t.entropy < 1e-9);
  CHECK(t.temperature == doctest::Approx(p.t0 + p.theta).epsilon(1e-9));
  CHECK(hits > 9900);
}

TEST_CASE("guidance with identical branches is a fixed point") {
  const TokenDistribution d({0.3, 1.2, -0.7, 2.0});
  SamplingOptions opts;
  opts.cfg_scale = 1.0;
  RngStream a(77);
  RngStream b(77);
  const auto with = sample_entropy_aware(d, d, opts, preset("star"), a);
  const auto without = sample_entropy_aware(d, std::nullopt, opts, preset("star"), b);
  CHECK(with == without);
}

TEST_CASE("entropy is read before truncation") {
  std::vector<double> logits{3.0, 2.0, 1.0, 0.0, -1.0};
  const TokenDistribution d(logits);
  SamplingOptions opts;
  opts.top_k = 1;
  RngStream rng(4);
  const auto t = sample_entropy_aware(d, std::nullopt, opts, preset("llamagen"), rng);
  const double expected = static_cast<double>(reference::entropy(reference::softmax(logits)));
  CHECK(t.entropy == doctest::Approx(expected).epsilon(1e-12));
  CHECK(t.token == 0);
  CHECK(t.probability == 1.0);
}

TEST_CASE("top-k applies before top-p") {
  // probs ~ {0.47, 0.17, 0.17, 0.17, 0.02}; with K = 2 then p = 0.7 the
  // nucleus is computed over the renormalized pair {0.73, 0.27} -> 1 token.
  const TokenDistribution d({2.0, 1.0, 1.0, 1.0, -1.0});
  const auto probs = tempered_distribution(d, 1.0, SamplingOptions{1.0, 2, 0.7});
  CHECK(probs[0] == 1.0);
  const auto p_only = tempered_distribution(d, 1.0, SamplingOptions{1.0, std::nullopt, 0.7});
  CHECK(p_only[1] > 0.0);
}

TEST_CASE("higher applied temperature lowers the argmax probability") {
  const TempParams p = preset("llamagen");
  const double hot = dynamic_temperature(0.0, p);
  const double cold = dynamic_temperature(9.0, p);
  for (double q : {0.55, 0.7, 0.9, 0.99}) {
    const auto d = from_probabilities(std::vector<double>{q, 1.0 - q});
    CHECK(softmax(rescale_logits(d, hot))[0] < softmax(rescale_logits(d, cold))[0]);
  }
}

TEST_CASE("pipeline is deterministic") {
  const TokenDistribution cond({0.1, 0.4, 0.2, 0.9, -0.3});
  const TokenDistribution uncond({0.0, 0.1, 0.0, 0.2, 0.0});
  const SamplingOptions opts{4.0, 4, 0.9};
  for (int s = 0; s < 20; ++s) {
    RngStream a(s, 3);
    RngStream b(s, 3);
    CHECK(sample_entropy_aware(cond, uncond, opts, preset("lumina-mgpt"), a) ==
          sample_entropy_aware(cond, uncond, opts, preset("lumina-mgpt"), b));
  }
}

TEST_CASE("sampling options are validated") {
  const TokenDistribution d({0.0, 1.0});
  RngStream rng(1);
  CHECK_THROWS_AS(sample_entropy_aware(d, std::nullopt, SamplingOptions{0.5}, preset("star"), rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      sample_entropy_aware(d, std::nullopt, SamplingOptions{1.0, 0}, preset("star"), rng),
      std::invalid_argument);
  CHECK_THROWS_AS(sample_entropy_aware(d, std::nullopt, SamplingOptions{1.0, std::nullopt, 0.0},
                                       preset("star"), rng),
                  std::invalid_argument);
}
