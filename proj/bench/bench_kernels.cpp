// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "rankmoments/binormal.hpp"
#include "rankmoments/correlation.hpp"
#include "rankmoments/grid.hpp"
#include "rankmoments/simulation.hpp"

using namespace rankmoments;

namespace {

PairedSample sample(std::size_t n) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> z;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = z(gen);
    y[i] = 0.5 * x[i] + 0.866 * z(gen);
  }
  return PairedSample(std::move(x), std::move(y));
}

void BM_kendall(benchmark::State& state) {
  const auto s = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kendall(s));
  state.SetComplexityN(state.range(0));
}

void BM_kendall_reference(benchmark::State& state) {
  const auto s = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kendall_reference(s));
  state.SetComplexityN(state.range(0));
}

ExperimentConfig config() {
  ExperimentConfig cfg;
  cfg.rho_grid = {0.0, 0.5};
  cfg.n_list = {20};
  cfg.trials = 20000;
  cfg.seed = 1;
  return cfg;
}

void BM_experiment(benchmark::State& state) {
  const auto cfg = config();
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg));
}

void BM_experiment_serial(benchmark::State& state) {
  const auto cfg = config();
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment_serial(cfg));
}

void BM_tabulate(benchmark::State& state) {
  const auto grid = parse_grid("0(0.01)1");
  for (auto _ : state) {
    clear_omega_cache();
    benchmark::DoNotOptimize(tabulate_omegas(grid));
  }
}

void BM_tabulate_serial(benchmark::State& state) {
  const auto grid = parse_grid("0(0.01)1");
  for (auto _ : state) {
    clear_omega_cache();
    benchmark::DoNotOptimize(tabulate_omegas_serial(grid));
  }
}

}  // namespace

BENCHMARK(BM_kendall)->RangeMultiplier(4)->Range(64, 16384)->Complexity();
BENCHMARK(BM_kendall_reference)->RangeMultiplier(4)->Range(64, 16384)->Complexity();
BENCHMARK(BM_experiment)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_experiment_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tabulate)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tabulate_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
