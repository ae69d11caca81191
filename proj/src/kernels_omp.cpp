#include <omp.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "volret/distributions.hpp"
#include "volret/error.hpp"
#include "volret/kernels.hpp"
#include "volret/models.hpp"

namespace volret::kernels::omp {

double sum_log_pdf(const DistributionSpec& spec, std::span<const double> z) {
  const std::size_t n = z.size();
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t end = std::min(n, (b + 1) * kReductionBlock);
    double s = 0.0;
    for (std::size_t i = b * kReductionBlock; i < end; ++i) s += log_pdf(spec, z[i]);
    partial[b] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

std::vector<double> mean_window_sums(std::span<const double> increments, std::span<const int> taus) {
  const std::size_t n = increments.size();
  for (int tau : taus) {
    if (tau < 1 || static_cast<std::size_t>(tau) > n) {
      throw InsufficientDataError("window longer than the increment series");
    }
  }
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + increments[i] * increments[i];

  std::vector<double> out(taus.size());
  const auto count = static_cast<std::ptrdiff_t>(taus.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto t = static_cast<std::size_t>(taus[static_cast<std::size_t>(i)]);
    const std::size_t windows = n - t + 1;
    double total = 0.0;
    for (std::size_t k = 0; k < windows; ++k) total += prefix[k + t] - prefix[k];
    out[static_cast<std::size_t>(i)] = total / static_cast<double>(windows);
  }
  return out;
}

std::vector<double> mean_cumulative_rv(const ModelParams& params, const PathBatch& batch) {
  const double dt = 1.0 / batch.steps_per_day;
  detail::check_step(params, dt);
  const detail::EulerStepper stepper(params, dt, batch.include_ito_drift);
  const std::size_t days = batch.n_days;
  std::vector<double> rv(batch.n_paths * days);
  const auto paths = static_cast<std::ptrdiff_t>(batch.n_paths);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t p = 0; p < paths; ++p) {
    auto engine = make_engine(batch.seed, static_cast<std::uint64_t>(p));
    std::normal_distribution<double> normal;
    double x = 0.0;
    double v = params.theta;
    double acc = 0.0;
    double* row = rv.data() + static_cast<std::size_t>(p) * days;
    for (std::size_t d = 0; d < days; ++d) {
      const double x_start = x;
      for (int s = 0; s < batch.steps_per_day; ++s) {
        const double e1 = normal(engine);
        const double e2 = normal(engine);
        stepper.step(x, v, e1, e2);
      }
      acc += (x - x_start) * (x - x_start);
      row[d] = acc;
    }
  }
  // path-ordered reduction
  std::vector<double> mean(days, 0.0);
  for (std::size_t p = 0; p < batch.n_paths; ++p) {
    for (std::size_t d = 0; d < days; ++d) mean[d] += rv[p * days + d];
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
  const std::size_t per = batch.samples_per_path;
  std::vector<double> out(batch.n_paths * per);
  const auto paths = static_cast<std::ptrdiff_t>(batch.n_paths);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t p = 0; p < paths; ++p) {
    auto engine = make_engine(batch.seed, static_cast<std::uint64_t>(p));
    std::normal_distribution<double> normal;
    double v = params.theta;
    for (std::size_t i = 0; i < burn; ++i) stepper.step_variance(v, normal(engine));
    double* row = out.data() + static_cast<std::size_t>(p) * per;
    for (std::size_t k = 0; k < per; ++k) {
      for (std::size_t i = 0; i < thin; ++i) stepper.step_variance(v, normal(engine));
      row[k] = v > 0.0 ? v : 0.0;
    }
  }
  return out;
}

}  // namespace volret::kernels::omp
