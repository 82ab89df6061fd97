#include <benchmark/benchmark.h>

#include "hsl/baselines.hpp"
#include "hsl/matrix.hpp"
#include "hsl/prox.hpp"
#include "hsl/random.hpp"
#include "hsl/solver.hpp"
#include "hsl/svd.hpp"
#include "hsl/synth.hpp"

namespace {

hsl::DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  hsl::RngStream rng(seed);
  return hsl::sample_gaussian(rng, rows, cols, 0.0, 1.0);
}

void BM_matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const hsl::DenseMatrix a = random_matrix(n, n, 1);
  const hsl::DenseMatrix b = random_matrix(n, n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hsl::matmul(a, b));
  }
}
BENCHMARK(BM_matmul)->Arg(64)->Arg(128)->Arg(256);

void BM_svd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const hsl::DenseMatrix m = random_matrix(n, 2 * n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hsl::svd(m));
  }
}
BENCHMARK(BM_svd)->Arg(32)->Arg(64)->Arg(100);

void BM_columnwise_l2_prox(benchmark::State& state) {
  const hsl::DenseMatrix m = random_matrix(100, 200, 4);
  const std::vector<double> thr(200, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hsl::columnwise_l2_prox(m, thr));
  }
}
BENCHMARK(BM_columnwise_l2_prox);

void BM_inner_wa_iteration(benchmark::State& state) {
  hsl::SynthSpec spec;
  spec.seed = 5;
  const hsl::SynthInstance inst = hsl::generate_hybrid(spec);
  hsl::HslConfig cfg;
  cfg.k = spec.k;
  cfg.lambda = 0.5;
  cfg.gamma = 0.1;
  cfg.max_inner_iters = 10;
  const hsl::HslModel init = hsl::random_init(inst.X, cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hsl::fit_inner_wa(inst.X, init.Z, init.b, init.W, init.A, cfg));
  }
}
BENCHMARK(BM_inner_wa_iteration);

void BM_rpca(benchmark::State& state) {
  hsl::RngStream rng(6);
  const hsl::DenseMatrix u = hsl::sample_gaussian(rng, 60, 4, 0.0, 1.0);
  const hsl::DenseMatrix v = hsl::sample_gaussian(rng, 4, 120, 0.0, 1.0);
  hsl::DenseMatrix x = hsl::matmul(u, v);
  for (std::size_t t = 0; t < 72; ++t) {
    const auto i = static_cast<std::size_t>(rng.uniform01() * 60.0);
    const auto j = static_cast<std::size_t>(rng.uniform01() * 120.0);
    x(std::min<std::size_t>(i, 59), std::min<std::size_t>(j, 119)) += 10.0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(hsl::rpca(x));
  }
}
BENCHMARK(BM_rpca);

}  // namespace

BENCHMARK_MAIN();
