#pragma once

#include <span>
#include <utility>
#include <vector>

#include "volret/distributions.hpp"
#include "volret/returns.hpp"

namespace volret {

// Fit of a moment-ratio curve to 1 + b exp(-a tau).
struct MomentFitResult {
  int n = 0;  // half order: the curve compares z^{2n}
  double a = 0.0;
  double b = 0.0;
  double residual_rms = 0.0;
  bool degenerate = false;  // every ratio equals 1: b = 0, a undefined (NaN)
  bool rate_unresolved = false;  // a tau_max < 0.05 or a tau_min > 20: no decay seen in the window
};

struct RatioPoint {
  int tau;
  double ratio;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Arithmetic mean of z^order; order in {2, 4, ..., 12}.
double empirical_moment(const ReturnSample& sample, int order);

// (empirical z^{2n} / theoretical z^{2n})^{1/(2n)} for each tau, with the
// product-law moment of `family` at fixed (alpha, theta).
std::vector<RatioPoint> moment_ratio_curve(const PriceSeries& series, double mu, Family family,
                                           double alpha, double theta, int n,
                                           std::span<const int> taus);
// Same, from precomputed samples (one per tau).
std::vector<RatioPoint> moment_ratio_curve(std::span<const ReturnSample> samples, Family family,
                                           double alpha, double theta, int n);

// Least squares fit of 1 + b exp(-a tau), a > 0, all points weighted equally.
MomentFitResult fit_relaxation(std::span<const RatioPoint> curve, int n = 0);

// Ordinary least squares y = slope x + intercept.
LinearFit linear_fit(std::span<const std::pair<double, double>> points);

}  // namespace volret
