#include <cmath>
#include <random>

#include "volret/distributions.hpp"
#include "volret/error.hpp"
#include "volret/kernels.hpp"
#include "volret/models.hpp"

namespace volret::kernels {
namespace serial {

double sum_log_pdf(const DistributionSpec& spec, std::span<const double> z) {
  double total = 0.0;
  for (double x : z) total += log_pdf(spec, x);
  return total;
}

std::vector<double> mean_window_sums(std::span<const double> increments, std::span<const int> taus) {
  std::vector<double> out;
  out.reserve(taus.size());
  const std::size_t n = increments.size();
  for (int tau : taus) {
    const auto t = static_cast<std::size_t>(tau);
    if (tau < 1 || t > n) throw InsufficientDataError("window longer than the increment series");
    const std::size_t windows = n - t + 1;
    double total = 0.0;
    for (std::size_t k = 0; k < windows; ++k) {
      double window = 0.0;
      for (std::size_t j = 0; j < t; ++j) window += increments[k + j] * increments[k + j];
      total += window;
    }
    out.push_back(total / static_cast<double>(windows));
  }
  return out;
}

std::vector<double> mean_cumulative_rv(const ModelParams& params, const PathBatch& batch) {
  const double dt = 1.0 / batch.steps_per_day;
  detail::check_step(params, dt);
  const detail::EulerStepper stepper(params, dt, batch.include_ito_drift);
  std::vector<double> mean(batch.n_days, 0.0);
  std::vector<double> rv(batch.n_days);
  for (std::size_t p = 0; p < batch.n_paths; ++p) {
    auto engine = make_engine(batch.seed, p);
    std::normal_distribution<double> normal;
    double x = 0.0;
    double v = params.theta;
    double acc = 0.0;
    for (std::size_t d = 0; d < batch.n_days; ++d) {
      const double x_start = x;
      for (int s = 0; s < batch.steps_per_day; ++s) {
        const double e1 = normal(engine);
        const double e2 = normal(engine);
        stepper.step(x, v, e1, e2);
      }
      acc += (x - x_start) * (x - x_start);
      rv[d] = acc;
    }
    for (std::size_t d = 0; d < batch.n_days; ++d) mean[d] += rv[d];
  }
  for (double& m : mean) m /= static_cast<double>(batch.n_paths);
  return mean;
}

std::vector<double> stationary_variance_samples(const ModelParams& params,
                                                const StationaryBatch& batch) {
  detail::check_step(params, batch.dt);
  const detail::EulerStepper stepper(params, batch.dt, false);
  const auto burn = static_cast<std::size_t>(std::ceil(batch.burn_in / batch.dt));
  const auto thin = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(batch.thin / batch.dt)));
  std::vector<double> out;
  out.reserve(batch.n_paths * batch.samples_per_path);
  for (std::size_t p = 0; p < batch.n_paths; ++p) {
    auto engine = make_engine(batch.seed, p);
    std::normal_distribution<double> normal;
    double v = params.theta;
    for (std::size_t i = 0; i < burn; ++i) stepper.step_variance(v, normal(engine));
    for (std::size_t k = 0; k < batch.samples_per_path; ++k) {
      for (std::size_t i = 0; i < thin; ++i) stepper.step_variance(v, normal(engine));
      out.push_back(v > 0.0 ? v : 0.0);
    }
  }
  return out;
}

}  // namespace serial

double sum_log_pdf(const DistributionSpec& spec, std::span<const double> z, Backend backend) {
  return backend == Backend::serial ? serial::sum_log_pdf(spec, z) : omp::sum_log_pdf(spec, z);
}

std::vector<double> mean_window_sums(std::span<const double> increments, std::span<const int> taus,
                                     Backend backend) {
  return backend == Backend::serial ? serial::mean_window_sums(increments, taus)
                                    : omp::mean_window_sums(increments, taus);
}

std::vector<double> mean_cumulative_rv(const ModelParams& params, const PathBatch& batch,
                                       Backend backend) {
  return backend == Backend::serial ? serial::mean_cumulative_rv(params, batch)
                                    : omp::mean_cumulative_rv(params, batch);
}

std::vector<double> stationary_variance_samples(const ModelParams& params,
                                                const StationaryBatch& batch, Backend backend) {
  return backend == Backend::serial ? serial::stationary_variance_samples(params, batch)
                                    : omp::stationary_variance_samples(params, batch);
}

}  // namespace volret::kernels
