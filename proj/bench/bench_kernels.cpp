#include <benchmark/benchmark.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "volret/distributions.hpp"
#include "volret/kernels.hpp"
#include "volret/models.hpp"

namespace {

using namespace volret;
using kernels::Backend;

std::vector<double> normal_sample(std::size_t n, double sd) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, sd);
  std::vector<double> z(n);
  for (auto& v : z) v = g(rng);
  return z;
}

template <Backend B>
void BM_SumLogPdf(benchmark::State& state) {
  const auto spec = DistributionSpec::heston_pd(2.0, 1e-4, 10.0);
  const auto z = normal_sample(static_cast<std::size_t>(state.range(0)), 0.03);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::sum_log_pdf(spec, z, B));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Backend B>
void BM_MeanWindowSums(benchmark::State& state) {
  const auto r = normal_sample(static_cast<std::size_t>(state.range(0)), 0.01);
  std::vector<int> taus(250);
  std::iota(taus.begin(), taus.end(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::mean_window_sums(r, taus, B));
}

template <Backend B>
void BM_MeanCumulativeRv(benchmark::State& state) {
  const auto params = ModelParams::from_alpha(Family::heston, 0.05, 1e-4, 2.0);
  kernels::PathBatch batch;
  batch.n_paths = static_cast<std::size_t>(state.range(0));
  batch.n_days = 250;
  batch.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::mean_cumulative_rv(params, batch, B));
}

template <Backend B>
void BM_StationarySamples(benchmark::State& state) {
  const auto params = ModelParams::from_alpha(Family::heston, 0.05, 1e-4, 2.0);
  kernels::StationaryBatch batch;
  batch.n_paths = static_cast<std::size_t>(state.range(0));
  batch.samples_per_path = 100;
  batch.burn_in = 200.0;
  batch.thin = 20.0;
  batch.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::stationary_variance_samples(params, batch, B));
  }
}

constexpr auto S = Backend::serial;
constexpr auto O = Backend::openmp;

}  // namespace

BENCHMARK(BM_SumLogPdf<S>)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_SumLogPdf<O>)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_MeanWindowSums<S>)->Arg(1 << 13)->Arg(1 << 15);
BENCHMARK(BM_MeanWindowSums<O>)->Arg(1 << 13)->Arg(1 << 15);
BENCHMARK(BM_MeanCumulativeRv<S>)->Arg(64)->Arg(512);
BENCHMARK(BM_MeanCumulativeRv<O>)->Arg(64)->Arg(512);
BENCHMARK(BM_StationarySamples<S>)->Arg(64);
BENCHMARK(BM_StationarySamples<O>)->Arg(64);

BENCHMARK_MAIN();
