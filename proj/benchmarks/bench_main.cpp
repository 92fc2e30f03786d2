#include <benchmark/benchmark.h>

#include <random>

#include "fy/fy.hpp"

namespace {

fy::Vector random_theta(int d, double scale, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, scale);
  fy::Vector theta(d);
  for (int i = 0; i < d; ++i) theta(i) = normal(gen);
  return theta;
}

void BM_sparsemax(benchmark::State& state) {
  const fy::Vector theta = random_theta(static_cast<int>(state.range(0)), 1.0, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fy::sparsemax(theta));
  }
}
BENCHMARK(BM_sparsemax)->Arg(16)->Arg(256)->Arg(4096);

void BM_softmax(benchmark::State& state) {
  const fy::Vector theta = random_theta(static_cast<int>(state.range(0)), 1.0, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fy::softmax(theta));
  }
}
BENCHMARK(BM_softmax)->Arg(16)->Arg(256)->Arg(4096);

void BM_entmax15_bisection(benchmark::State& state) {
  const fy::Vector theta = random_theta(static_cast<int>(state.range(0)), 2.0, 11);
  fy::SolverConfig cfg;
  cfg.method = fy::SolveMethod::Bisection;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fy::entmax_tsallis(theta, 1.5, cfg));
  }
}
BENCHMARK(BM_entmax15_bisection)->Arg(16)->Arg(256)->Arg(4096);

void BM_entmax15_brent(benchmark::State& state) {
  const fy::Vector theta = random_theta(static_cast<int>(state.range(0)), 2.0, 11);
  fy::SolverConfig cfg;
  cfg.method = fy::SolveMethod::Brent;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fy::entmax_tsallis(theta, 1.5, cfg));
  }
}
BENCHMARK(BM_entmax15_brent)->Arg(16)->Arg(256)->Arg(4096);

void BM_prox_shannon(benchmark::State& state) {
  const fy::Vector eta = random_theta(static_cast<int>(state.range(0)), 1.0, 13);
  const fy::ProxSpec spec = fy::ProxSpec::neg_shannon();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fy::prox(spec, 0.7, eta));
  }
}
BENCHMARK(BM_prox_shannon)->Arg(16)->Arg(256);

void BM_forward_backward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = 8;
  fy::Vector theta = random_theta(n * m * m, 1.0, 17);
  for (int i = 0; i < m; ++i)
    for (int j = 1; j < m; ++j) theta((0 * m + i) * m + j) = theta((0 * m + i) * m + 0);
  const auto pot = fy::SequencePotentials::from_vector(n, m, theta);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fy::forward_backward(pot));
  }
}
BENCHMARK(BM_forward_backward)->Arg(8)->Arg(64);

void BM_sparsemap_sequence(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = 4;
  const fy::Vector theta = random_theta(n * m * m, 1.0, 19);
  const fy::SequenceOracle oracle(n, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fy::sparsemap(oracle, theta));
  }
}
BENCHMARK(BM_sparsemap_sequence)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
