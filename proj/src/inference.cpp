#include "volret/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "volret/error.hpp"
#include "volret/optimize.hpp"
#include "volret/quadrature.hpp"

namespace volret {
namespace {

constexpr std::size_t kMinFitSamples = 50;
constexpr double kHestonAlphaMin = 1.0;
constexpr double kGridStep = 0.02;      // knot spacing near the centre, in units of the scale
constexpr double kGridCore = 10.0;      // uniform region half-width, in units of the scale
constexpr double kGridGrowth = 1.05;    // geometric growth beyond the core
constexpr double kTailNegligible = 1e-16;
// Heston densities are not smooth at 0: refine geometrically towards it.
constexpr double kCuspRatio = 1.25;
constexpr double kCuspInner = 1e-9;

struct SampleMoments {
  double mean = 0.0;
  double var = 0.0;
  double kurtosis = 0.0;
};

SampleMoments sample_moments(std::span<const double> z) {
  SampleMoments m;
  const double n = static_cast<double>(z.size());
  m.mean = std::accumulate(z.begin(), z.end(), 0.0) / n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : z) {
    const double d2 = (x - m.mean) * (x - m.mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  m.var = m2;
  m.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
  return m;
}

void check_fit_sample(const ReturnSample& sample, std::size_t min_size) {
  if (sample.size() < min_size) {
    throw FitError("fit needs at least " + std::to_string(min_size) + " values, got " +
                   std::to_string(sample.size()));
  }
  const auto [lo, hi] = std::minmax_element(sample.values.begin(), sample.values.end());
  if (*lo == *hi) throw FitError("degenerate sample: all values identical");
  for (double v : sample.values) {
    if (!std::isfinite(v)) throw FitError("sample contains non-finite values");
  }
}

DistributionSpec with_params(Kind kind, double alpha, double theta, double tau) {
  return DistributionSpec{kind, alpha, theta, tau, 0.0};
}

double normal_cdf(double z, double sigma) {
  return 0.5 * std::erfc(-z / (sigma * std::numbers::sqrt2));
}

}  // namespace

double log_likelihood(const DistributionSpec& spec, std::span<const double> z,
                      kernels::Backend backend) {
  spec.validate();
  return kernels::sum_log_pdf(spec, z, backend);
}

DistributionSpec moment_start(const ReturnSample& sample, Kind kind) {
  const auto m = sample_moments(sample.values);
  const double tau = sample.tau;
  if (kind == Kind::normal) return DistributionSpec::normal(std::sqrt(m.var), tau);
  const double theta0 = m.var / tau;
  const double excess = m.kurtosis - 3.0;
  if (is_heston(kind)) {
    const double alpha0 = excess > 0.0 ? 3.0 / excess : 1e4;
    return with_params(kind, std::clamp(alpha0, 1.01, 1e4), theta0, tau);
  }
  // kurtosis 3 r / (r - 1) with r = alpha / theta
  const double r = excess > 0.0 ? m.kurtosis / excess : 1e6;
  return with_params(kind, std::clamp(r, 1.05, 1e6) * theta0, theta0, tau);
}

FitResult fit_normal(const ReturnSample& sample) {
  if (sample.size() < 2) throw FitError("normal fit needs at least 2 values");
  double ss = 0.0;
  for (double z : sample.values) ss += z * z;
  const double n = static_cast<double>(sample.size());
  const double var = ss / n;
  if (!(var > 0.0)) throw FitError("degenerate sample: zero variance");
  FitResult r;
  r.spec = DistributionSpec::normal(std::sqrt(var), sample.tau);
  r.log_likelihood = -0.5 * n * (std::log(2.0 * std::numbers::pi * var) + 1.0);
  r.n_samples = sample.size();
  r.converged = true;
  return r;
}

FitResult mle_fit(const ReturnSample& sample, Kind kind, const MleOptions& options,
                  std::optional<DistributionSpec> start) {
  if (kind == Kind::normal) return fit_normal(sample);
  check_fit_sample(sample, kMinFitSamples);
  const double tau = sample.tau;

  DistributionSpec init;
  if (start) {
    init = *start;
    init.kind = kind;
    init.tau = tau;
  } else if (is_joint(kind)) {
    const Kind pd = is_heston(kind) ? Kind::heston_pd : Kind::mult_pd;
    init = mle_fit(sample, pd, options).spec;
    init.kind = kind;
  } else {
    init = moment_start(sample, kind);
  }
  if (is_heston(kind)) init.alpha = std::max(init.alpha, kHestonAlphaMin * 1.01);
  init.validate();

  const bool heston = is_heston(kind);
  auto objective = [&](std::span<const double> p) -> double {
    const double alpha = std::exp(p[0]);
    const double theta = std::exp(p[1]);
    if (heston && alpha < kHestonAlphaMin) return INFINITY;
    if (!std::isfinite(alpha) || !std::isfinite(theta) || !(theta > 0.0)) return INFINITY;
    return -kernels::sum_log_pdf(with_params(kind, alpha, theta, tau), sample.values,
                                 options.backend);
  };

  NelderMeadOptions nm;
  nm.max_evals = options.max_evals;
  nm.x_tol = 1e-7;
  nm.initial_step = start || is_joint(kind) ? 0.05 : 0.25;
  auto best = nelder_mead(objective, {std::log(init.alpha), std::log(init.theta)}, nm);
  int evals = best.n_evals;
  if (!best.converged) {
    nm.initial_step = 0.05;
    auto again = nelder_mead(objective, best.x, nm);
    evals += again.n_evals;
    if (again.value <= best.value) best = again;
    best.converged = again.converged;
  }

  FitResult r;
  r.spec = with_params(kind, std::exp(best.x[0]), std::exp(best.x[1]), tau);
  r.log_likelihood = -best.value;
  r.n_samples = sample.size();
  r.converged = best.converged && std::isfinite(r.log_likelihood);
  r.n_evals = evals;
  return r;
}

double ll_ratio(const FitResult& fit, const FitResult& baseline) {
  if (baseline.log_likelihood == 0.0) throw ValidationError("baseline log-likelihood is zero");
  return fit.log_likelihood / baseline.log_likelihood;
}

double ll_difference(const FitResult& fit, const FitResult& baseline) {
  return fit.log_likelihood - baseline.log_likelihood;
}

Cdf::Cdf(const DistributionSpec& spec) : spec_(spec) {
  spec_.validate();
  if (spec_.kind == Kind::normal) return;

  const double s = spec_.scale();
  auto density = [this](double z) { return pdf(spec_, z); };

  std::vector<double> offsets;
  if (is_heston(spec_.kind)) {
    std::vector<double> inner;
    for (double u = kGridStep / kCuspRatio; u > kCuspInner; u /= kCuspRatio) inner.push_back(u);
    offsets.assign(inner.rbegin(), inner.rend());
  }
  for (int i = 1; i * kGridStep <= kGridCore + 1e-12; ++i) offsets.push_back(i * kGridStep);
  auto negligible = [&](double u) {
    const double z = u * s;
    return density(z) * z < kTailNegligible && density(-z) * z < kTailNegligible;
  };
  for (double u = offsets.back() * kGridGrowth; !negligible(offsets.back()) && u < 1e12;
       u *= kGridGrowth) {
    offsets.push_back(u);
  }
  knots_.reserve(2 * offsets.size() + 1);
  for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) knots_.push_back(-*it * s);
  knots_.push_back(0.0);
  for (double u : offsets) knots_.push_back(u * s);

  dens_.resize(knots_.size());
  for (std::size_t k = 0; k < knots_.size(); ++k) dens_[k] = density(knots_[k]);

  // The two intervals touching a Heston cusp carry negligible mass and are interpolated linearly.
  linear_.assign(knots_.size() - 1, false);
  if (is_heston(spec_.kind)) {
    const std::size_t mid = offsets.size();
    linear_[mid - 1] = true;
    linear_[mid] = true;
  }

  cum_.resize(knots_.size());
  cum_[0] = quad::integrate_half_line(density, knots_.front(), 0.25 * (-knots_.front()), -1).value;
  for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
    cum_[k + 1] = cum_[k] + quad::integrate(density, knots_[k], knots_[k + 1]).value;
  }
  right_tail_ = quad::integrate_half_line(density, knots_.back(), 0.25 * knots_.back(), +1).value;
}

double Cdf::operator()(double z) const {
  if (spec_.kind == Kind::normal) return normal_cdf(z, spec_.sigma);
  if (std::isnan(z)) return z;
  auto density = [this](double x) { return pdf(spec_, x); };
  if (z <= knots_.front()) {
    if (z == -INFINITY) return 0.0;
    return std::clamp(quad::integrate_half_line(density, z, 0.25 * std::abs(z), -1).value, 0.0,
                      cum_.front());
  }
  if (z >= knots_.back()) {
    if (z == INFINITY) return 1.0;
    // continuous with the table at the last knot
    const double beyond = quad::integrate_half_line(density, z, 0.25 * std::abs(z), +1).value;
    return std::clamp(cum_.back() + (right_tail_ - beyond), std::min(cum_.back(), 1.0), 1.0);
  }
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), z);
  const std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
  if (z == knots_[k]) return std::clamp(cum_[k], 0.0, 1.0);
  if (linear_[k]) {
    const double t = (z - knots_[k]) / (knots_[k + 1] - knots_[k]);
    return std::clamp(cum_[k] + t * (cum_[k + 1] - cum_[k]), 0.0, 1.0);
  }

  // monotone cubic Hermite (Fritsch-Carlson limited slopes)
  const double h = knots_[k + 1] - knots_[k];
  const double delta = (cum_[k + 1] - cum_[k]) / h;
  double m0 = dens_[k];
  double m1 = dens_[k + 1];
  if (delta <= 0.0) {
    m0 = m1 = 0.0;
  } else {
    const double a = m0 / delta;
    const double b = m1 / delta;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double t = 3.0 / std::sqrt(r2);
      m0 = t * a * delta;
      m1 = t * b * delta;
    }
  }
  const double t = (z - knots_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  // increment form: rounding stays monotone when cum_ is close to 1
  const double rise = cum_[k + 1] - cum_[k];
  const double step = (3 * t2 - 2 * t3) * rise + (t3 - 2 * t2 + t) * h * m0 + (t3 - t2) * h * m1;
  return std::clamp(cum_[k] + std::clamp(step, 0.0, std::max(rise, 0.0)), 0.0, 1.0);
}

double Cdf::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile needs p in (0, 1)");
  double lo = -spec_.scale();
  double hi = spec_.scale();
  while ((*this)(lo) > p) lo *= 2.0;
  while ((*this)(hi) < p) hi *= 2.0;
  if (spec_.kind != Kind::normal && p > cum_.front() && p < cum_.back()) {
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), p);
    const std::size_t k = static_cast<std::size_t>(it - cum_.begin()) - 1;
    lo = std::max(lo, knots_[k]);
    hi = std::min(hi, knots_[std::min(k + 1, knots_.size() - 1)]);
  }
  // safeguarded Newton with the density as derivative
  double z = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = (*this)(z) - p;
    if (f == 0.0) return z;
    (f < 0.0 ? lo : hi) = z;
    const double d = pdf(spec_, z);
    double next = d > 0.0 ? z - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 1e-15 * std::max(std::abs(z), spec_.scale())) return next;
    z = next;
  }
  return z;
}

double cdf(const DistributionSpec& spec, double z) { return Cdf(spec)(z); }

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ValidationError("KS statistic needs at least one value");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, std::abs((i + 1) / n - f), std::abs(i / n - f)});
  }
  return d;
}

double ks_statistic(const ReturnSample& sample, const DistributionSpec& spec) {
  const Cdf table(spec);
  return ks_statistic(sample.values, [&](double z) { return table(z); });
}

}  // namespace volret
