// Serial reference vs OpenMP replication runner on the exp2 (k = 3) task.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <numeric>

#include "siglab/linmodel.hpp"
#include "siglab/replication.hpp"

namespace {

using namespace siglab;

constexpr std::size_t kN = 100;
constexpr std::size_t kLags = 3;

void lag_regression(rng::RngStream& rng, std::span<std::uint8_t> hit, std::span<double>) {
  std::vector<double> x(kN + kLags - 1), y(kN);
  for (double& v : x) v = rng::standard_normal(rng);
  for (double& v : y) v = rng::standard_normal(rng);
  const auto design = linmodel::build_lag_matrix(x, kLags, kN);
  const auto fit = linmodel::ols_fit(design, y);
  const std::size_t slopes[] = {1, 2, 3};
  hit[0] = linmodel::max_abs_t(fit, slopes) > 1.985;
}

void BM_Serial(benchmark::State& state) {
  const auto reps = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto totals = experiments::run_replications_serial(lag_regression, {1, 0}, reps, 7);
    benchmark::DoNotOptimize(totals.counts.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * reps));
}

void BM_OpenMP(benchmark::State& state) {
  const auto reps = static_cast<std::uint64_t>(state.range(0));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto totals = experiments::run_replications(lag_regression, {1, 0}, reps, 7, workers);
    benchmark::DoNotOptimize(totals.counts.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * reps));
}

void worker_grid(benchmark::internal::Benchmark* b) {
  const int max_workers = omp_get_max_threads();
  for (int w = 2; w <= std::max(2, max_workers); w *= 2) b->Args({10000, w});
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OpenMP)->Apply(worker_grid)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
