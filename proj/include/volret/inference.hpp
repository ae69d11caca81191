#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "volret/distributions.hpp"
#include "volret/kernels.hpp"
#include "volret/returns.hpp"

namespace volret {

struct FitResult {
  DistributionSpec spec;
  double log_likelihood = 0.0;
  std::size_t n_samples = 0;
  bool converged = false;
  int n_evals = 0;
};

struct MleOptions {
  int max_evals = 4000;
  kernels::Backend backend = kernels::Backend::openmp;
};

// Sum of log densities over the sample.
double log_likelihood(const DistributionSpec& spec, std::span<const double> z,
                      kernels::Backend backend = kernels::Backend::openmp);

// Moment-based starting point: theta0 = var / tau, alpha0 from the kurtosis.
DistributionSpec moment_start(const ReturnSample& sample, Kind kind);

// Maximum likelihood over (ln alpha, ln theta) with tau fixed to sample.tau.
// Joint-law kinds start from the matching product-law fit unless `start` is given.
// Throws FitError for fewer than 50 values or a degenerate sample.
FitResult mle_fit(const ReturnSample& sample, Kind kind, const MleOptions& options = {},
                  std::optional<DistributionSpec> start = std::nullopt);

// Zero-mean normal with sigma^2 = mean(z^2).
FitResult fit_normal(const ReturnSample& sample);

// fit.log_likelihood / baseline.log_likelihood.
double ll_ratio(const FitResult& fit, const FitResult& baseline);
double ll_difference(const FitResult& fit, const FitResult& baseline);

// Cumulative distribution of a return density. Built once per spec: the
// cumulative integral is tabulated on a knot grid (uniform near the centre,
// geometric in the tails), and values between knots use monotone cubic
// Hermite interpolation with the exact density as slope.
class Cdf {
public:
  explicit Cdf(const DistributionSpec& spec);

  double operator()(double z) const;
  double quantile(double p) const;
  const DistributionSpec& spec() const noexcept { return spec_; }

private:
  DistributionSpec spec_;
  std::vector<double> knots_;
  std::vector<double> cum_;    // F at knots
  std::vector<double> dens_;   // slopes at knots
  double right_tail_ = 0.0;    // mass beyond the last knot
  std::vector<bool> linear_;   // interval k is interpolated linearly
};

double cdf(const DistributionSpec& spec, double z);

// sup_i max(|i/n - F(z_(i))|, |(i-1)/n - F(z_(i))|) over the sorted sample.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);
double ks_statistic(const ReturnSample& sample, const DistributionSpec& spec);

}  // namespace volret
