#include <benchmark/benchmark.h>

#include "dmfd/dmfd.hpp"

namespace {

using namespace dmfd;

Matrix random_matrix(Prng& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (double& v : m.values()) v = rng.uniform01() - 0.5;
  return m;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Prng rng(1);
  const Matrix a = random_matrix(rng, n, n), b = random_matrix(rng, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(32)->Arg(64)->Arg(128);

void BM_MatVec(benchmark::State& state) {
  Prng rng(2);
  const Matrix w = random_matrix(rng, 49, 784), x = random_matrix(rng, 784, 1);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(w, x));
}
BENCHMARK(BM_MatVec);

void BM_MatTVec(benchmark::State& state) {
  Prng rng(3);
  const Matrix w = random_matrix(rng, 49, 784), y = random_matrix(rng, 49, 1);
  for (auto _ : state) benchmark::DoNotOptimize(matmul_at_b(w, y));
}
BENCHMARK(BM_MatTVec);

void BM_RbmStep(benchmark::State& state) {
  const auto scheme = static_cast<Scheme>(state.range(0));
  Prng rng(4);
  RbmParams p = init_params(784, 49, 1, Activation::Softsign, Activation::Relu, rng);
  Matrix x(784, 1);
  for (double& v : x.values()) v = rng.uniform01();
  TrainConfig c;
  c.scheme = scheme;
  c.rate.scalar = 1e-4;
  for (auto _ : state) {
    const double e = scheme == Scheme::GradientDescent ? gd_update(p, x, c) : fd_update(p, x, c);
    benchmark::DoNotOptimize(e);
  }
  state.SetLabel(scheme == Scheme::GradientDescent ? "gd 784x49" : "fd 784x49");
}
BENCHMARK(BM_RbmStep)->Arg(0)->Arg(1);

void BM_BlockStep(benchmark::State& state) {
  Prng rng(5);
  RbmParams p = init_params(12, 6, 50, Activation::Identity, Activation::Identity, rng);
  const Matrix x = random_matrix(rng, 12, 50);
  TrainConfig c;
  c.rate.scalar = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(gd_update(p, x, c));
}
BENCHMARK(BM_BlockStep);

void BM_Gradients(benchmark::State& state) {
  Prng rng(6);
  const RbmParams p = init_params(7, 5, 3, Activation::Sigmoid, Activation::Softsign, rng);
  const Matrix x = random_matrix(rng, 7, 3);
  for (auto _ : state) benchmark::DoNotOptimize(gradients(p, x));
}
BENCHMARK(BM_Gradients);

void BM_NormalDraw(benchmark::State& state) {
  Prng rng(7);
  const DistSpec dist = Normal{0.5, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(draw(rng, dist));
}
BENCHMARK(BM_NormalDraw);

}  // namespace

BENCHMARK_MAIN();
