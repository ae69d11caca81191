#include "volret/moments.hpp"

#include <boost/math/tools/minima.hpp>
#include <algorithm>
#include <cmath>
#include <limits>

#include "volret/error.hpp"

namespace volret {
namespace {

DistributionSpec product_spec(Family family, double alpha, double theta, double tau) {
  return family == Family::heston ? DistributionSpec::heston_pd(alpha, theta, tau)
                                  : DistributionSpec::mult_pd(alpha, theta, tau);
}

// For fixed a the optimal b is linear least squares.
struct Projected {
  double b;
  double ssr;
};

Projected project(std::span<const RatioPoint> curve, double a) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& p : curve) {
    const double e = std::exp(-a * p.tau);
    num += e * (p.ratio - 1.0);
    den += e * e;
  }
  const double b = den > 0.0 ? num / den : 0.0;
  double ssr = 0.0;
  for (const auto& p : curve) {
    const double r = p.ratio - 1.0 - b * std::exp(-a * p.tau);
    ssr += r * r;
  }
  return {b, ssr};
}

}  // namespace

double empirical_moment(const ReturnSample& sample, int order) {
  if (order < 2 || order > 12 || order % 2 != 0) {
    throw ValidationError("empirical moment order must be one of 2, 4, ..., 12");
  }
  if (sample.values.empty()) throw InsufficientDataError("empirical moment of an empty sample");
  double total = 0.0;
  for (double z : sample.values) {
    const double z2 = z * z;
    double p = z2;
    for (int k = 2; k <= order / 2; ++k) p *= z2;
    total += p;
  }
  return total / static_cast<double>(sample.values.size());
}

std::vector<RatioPoint> moment_ratio_curve(std::span<const ReturnSample> samples, Family family,
                                           double alpha, double theta, int n) {
  if (n < 1) throw ValidationError("moment half-order n must be positive");
  // existence is independent of tau; fail before touching data
  (void)theoretical_moment(product_spec(family, alpha, theta, 1.0), 2 * n);
  std::vector<RatioPoint> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    const double emp = empirical_moment(s, 2 * n);
    const double theory = theoretical_moment(product_spec(family, alpha, theta, s.tau), 2 * n);
    out.push_back({s.tau, std::pow(emp / theory, 1.0 / (2 * n))});
  }
  return out;
}

std::vector<RatioPoint> moment_ratio_curve(const PriceSeries& series, double mu, Family family,
                                           double alpha, double theta, int n,
                                           std::span<const int> taus) {
  if (n < 1) throw ValidationError("moment half-order n must be positive");
  (void)theoretical_moment(product_spec(family, alpha, theta, 1.0), 2 * n);
  std::vector<ReturnSample> samples;
  samples.reserve(taus.size());
  for (int tau : taus) samples.push_back(tau_returns(series, tau, mu));
  return moment_ratio_curve(samples, family, alpha, theta, n);
}

MomentFitResult fit_relaxation(std::span<const RatioPoint> curve, int n) {
  if (curve.size() < 3) throw InsufficientDataError("relaxation fit needs at least 3 points");
  MomentFitResult result;
  result.n = n;

  bool flat = true;
  for (const auto& p : curve) flat = flat && p.ratio == 1.0;
  if (flat) {
    result.degenerate = true;
    result.a = std::numeric_limits<double>::quiet_NaN();
    return result;
  }

  // Initial rate from the log-linear regression of ln|ratio - 1| on tau.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  double tau_sum = 0.0;
  for (const auto& p : curve) {
    tau_sum += p.tau;
    const double dev = std::abs(p.ratio - 1.0);
    if (dev <= 0.0) continue;
    const double y = std::log(dev);
    sx += p.tau;
    sy += y;
    sxx += static_cast<double>(p.tau) * p.tau;
    sxy += p.tau * y;
    ++m;
  }
  double a0 = 1.0 / (tau_sum / static_cast<double>(curve.size()));
  if (m >= 2) {
    const double denom = m * sxx - sx * sx;
    if (denom > 0.0) {
      const double slope = (m * sxy - sx * sy) / denom;
      if (slope < 0.0 && std::isfinite(slope)) a0 = -slope;
    }
  }

  // Refine over ln a: coarse scan, then Brent around the best grid point.
  auto ssr = [&](double log_a) { return project(curve, std::exp(log_a)).ssr; };
  const double lo = std::log(a0) - 8.0;
  const double hi = std::log(a0) + 8.0;
  constexpr int kScan = 320;
  int best_i = 0;
  double best = INFINITY;
  for (int i = 0; i <= kScan; ++i) {
    const double v = ssr(lo + (hi - lo) * i / kScan);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  const double step = (hi - lo) / kScan;
  const double left = lo + step * (best_i - 1);
  const double right = lo + step * (best_i + 1);
  const auto [log_a, value] = boost::math::tools::brent_find_minima(
      ssr, left, right, std::numeric_limits<double>::digits);
  (void)value;

  result.a = std::exp(log_a);
  const auto [first, last] = std::minmax_element(
      curve.begin(), curve.end(), [](const RatioPoint& x, const RatioPoint& y) { return x.tau < y.tau; });
  result.rate_unresolved = result.a * last->tau < 0.05 || result.a * first->tau > 20.0;
  const auto proj = project(curve, result.a);
  result.b = proj.b;
  result.residual_rms = std::sqrt(proj.ssr / static_cast<double>(curve.size()));
  return result;
}

LinearFit linear_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw InsufficientDataError("linear fit needs at least 2 points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("linear fit needs at least 2 distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - (fit.slope * x + fit.intercept);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace volret
