#include <benchmark/benchmark.h>

#include "entropix/distribution.hpp"
#include "entropix/mask_decode.hpp"
#include "entropix/spec_decode.hpp"
#include "entropix/temperature.hpp"
#include "entropix/toy_model.hpp"

using namespace entropix;

namespace {

std::vector<double> random_logits(std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> logits(n);
  for (double& x : logits) x = 8.0 * rng.next_uniform();
  return logits;
}

ToyOracle bench_oracle(double sensitivity) {
  OracleConfig c;
  c.shape = {16, 16};
  c.profile = profile_rect(c.shape, 0.9, 0.1, Rect{4, 4, 8, 8});
  c.seed = 7;
  c.context_sensitivity = sensitivity;
  return ToyOracle(c);
}

void BM_SoftmaxEntropy(benchmark::State& state) {
  const TokenDistribution d{random_logits(static_cast<std::size_t>(state.range(0)), 1)};
  for (auto _ : state) {
    const Probabilities p = softmax(d);
    benchmark::DoNotOptimize(entropy(p));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SoftmaxEntropy)->Arg(64)->Arg(1024)->Arg(16384);

void BM_SampleEntropyAware(benchmark::State& state) {
  const TokenDistribution cond{random_logits(static_cast<std::size_t>(state.range(0)), 2)};
  const TokenDistribution uncond{random_logits(static_cast<std::size_t>(state.range(0)), 3)};
  SamplingOptions options;
  options.cfg_scale = 3.0;
  options.top_k = 100;
  options.top_p = 0.9;
  const TempParams params = preset("lumina-mgpt");
  RngStream rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_entropy_aware(cond, uncond, options, params, rng).token);
  }
}
BENCHMARK(BM_SampleEntropyAware)->Arg(1024)->Arg(16384);

void BM_JacobiDecode(benchmark::State& state) {
  const ToyOracle oracle = bench_oracle(0.15);
  const SpecAcceptParams accept{8.0, 16.0,
                                state.range(0) == 0 ? AcceptMode::kBaseline
                                                    : AcceptMode::kEntropyAware};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto r =
        jacobi_decode(oracle, 256, 16, preset("llamagen"), accept, {}, RngStream(seed++));
    benchmark::DoNotOptimize(r.stats.model_invocations);
  }
}
BENCHMARK(BM_JacobiDecode)->Arg(0)->Arg(1)->ArgNames({"entropy_aware"});

void BM_MaskGenerate(benchmark::State& state) {
  const ToyOracle oracle = bench_oracle(0.15);
  const auto schedule = cosine_schedule(256, static_cast<std::size_t>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto r = mask_generate(oracle, schedule, preset("meissonic"), {}, RngStream(seed++));
    benchmark::DoNotOptimize(r.model_invocations);
  }
}
BENCHMARK(BM_MaskGenerate)->Arg(8)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
