#pragma once

// Data-parallel inner loops. Every kernel has a straightforward serial
// reference in kernels::serial and an OpenMP version in kernels::omp.
// The OpenMP versions reduce in a fixed order, so their results do not
// depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace volret {
struct DistributionSpec;
struct ModelParams;
}  // namespace volret

namespace volret::kernels {

enum class Backend { serial, openmp };

// Monte-Carlo batch of independent coupled (x, v) paths sampled once a day.
struct PathBatch {
  std::size_t n_paths = 1;
  std::size_t n_days = 1;
  int steps_per_day = 10;
  std::uint64_t seed = 0;
  bool include_ito_drift = true;
};

// Independent variance paths, each burnt in and then thinned.
struct StationaryBatch {
  std::size_t n_paths = 1;
  std::size_t samples_per_path = 1;
  double dt = 0.1;
  double burn_in = 0.0;  // days
  double thin = 1.0;     // days between retained samples
  std::uint64_t seed = 0;
};

// Block size of the ordered reductions.
inline constexpr std::size_t kReductionBlock = 4096;

namespace serial {
double sum_log_pdf(const DistributionSpec& spec, std::span<const double> z);
std::vector<double> mean_window_sums(std::span<const double> increments, std::span<const int> taus);
std::vector<double> mean_cumulative_rv(const ModelParams& params, const PathBatch& batch);
std::vector<double> stationary_variance_samples(const ModelParams& params,
                                                const StationaryBatch& batch);
}  // namespace serial

namespace omp {
double sum_log_pdf(const DistributionSpec& spec, std::span<const double> z);
std::vector<double> mean_window_sums(std::span<const double> increments, std::span<const int> taus);
std::vector<double> mean_cumulative_rv(const ModelParams& params, const PathBatch& batch);
std::vector<double> stationary_variance_samples(const ModelParams& params,
                                                const StationaryBatch& batch);
}  // namespace omp

// Dispatch helpers.
double sum_log_pdf(const DistributionSpec& spec, std::span<const double> z,
                   Backend backend = Backend::openmp);
// For each tau: mean over windows k = 0 .. n - tau of sum_{j<tau} increments[k+j]^2.
std::vector<double> mean_window_sums(std::span<const double> increments, std::span<const int> taus,
                                     Backend backend = Backend::openmp);
// Element tau-1 is the mean over paths of sum_{d<tau} (x_{d+1} - x_d)^2.
std::vector<double> mean_cumulative_rv(const ModelParams& params, const PathBatch& batch,
                                       Backend backend = Backend::openmp);
// Samples ordered by (path, sample index).
std::vector<double> stationary_variance_samples(const ModelParams& params,
                                                const StationaryBatch& batch,
                                                Backend backend = Backend::openmp);

}  // namespace volret::kernels
