#include "volret/models.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>

#include "volret/error.hpp"

namespace volret {

std::string_view to_string(Family family) {
  return family == Family::heston ? "heston" : "multiplicative";
}

void ModelParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("theta must be positive");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be positive");
  if (!(std::abs(rho) <= 1.0)) throw DomainError("rho must lie in [-1, 1]");
  const double a = alpha();
  if (!(a > 0.0)) throw DomainError("alpha must be positive");
  if (family == Family::heston && !(a > 1.0)) {
    throw DomainError("Heston model requires alpha = 2 gamma theta / kappa^2 > 1");
  }
}

ModelParams ModelParams::from_alpha(Family family, double gamma, double theta, double alpha,
                                    double rho) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  ModelParams p{family, gamma, theta, std::sqrt(2.0 * gamma * theta / alpha), rho};
  p.validate();
  return p;
}

double steady_state_variance_pdf(const ModelParams& params, double v) {
  params.validate();
  if (!(v > 0.0)) throw DomainError("variance must be positive");
  const double a = params.alpha();
  double log_pdf = 0.0;
  if (params.family == Family::heston) {
    const double rate = a / params.theta;
    log_pdf = a * std::log(rate) + (a - 1.0) * std::log(v) - rate * v - std::lgamma(a);
  } else {
    const double shape = a / params.theta + 1.0;
    log_pdf = shape * std::log(a) - (shape + 1.0) * std::log(v) - a / v - std::lgamma(shape);
  }
  return std::exp(log_pdf);
}

double steady_state_variance_cdf(const ModelParams& params, double v) {
  params.validate();
  if (!(v > 0.0)) return 0.0;
  const double a = params.alpha();
  if (params.family == Family::heston) {
    return boost::math::gamma_p(a, v * a / params.theta);
  }
  return boost::math::gamma_q(a / params.theta + 1.0, a / v);
}

double sample_steady_state_variance(const ModelParams& params, Engine& engine) {
  const double a = params.alpha();
  if (params.family == Family::heston) {
    std::gamma_distribution<double> g(a, params.theta / a);
    return g(engine);
  }
  std::gamma_distribution<double> g(a / params.theta + 1.0, 1.0 / a);
  return 1.0 / g(engine);
}

namespace detail {

void check_step(const ModelParams& params, double dt) {
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (!(dt * params.gamma < 0.1)) {
    throw StabilityError("dt * gamma must be below 0.1 for the Euler scheme");
  }
}

EulerStepper::EulerStepper(const ModelParams& params, double dt, bool include_ito_drift)
    : gamma_(params.gamma),
      theta_(params.theta),
      kappa_(params.kappa),
      dt_(dt),
      sqrt_dt_(std::sqrt(dt)),
      rho_(params.rho),
      rho_c_(std::sqrt(1.0 - params.rho * params.rho)),
      heston_(params.family == Family::heston),
      ito_(include_ito_drift) {}

void EulerStepper::step(double& x, double& v, double e1, double e2) const {
  const double vp = v > 0.0 ? v : 0.0;
  const double sd = std::sqrt(vp);
  const double noise = heston_ ? sd : vp;
  x += (ito_ ? -0.5 * vp * dt_ : 0.0) + sd * sqrt_dt_ * e1;
  v += -gamma_ * (vp - theta_) * dt_ + kappa_ * noise * sqrt_dt_ * (rho_ * e1 + rho_c_ * e2);
}

void EulerStepper::step_variance(double& v, double e2) const {
  const double vp = v > 0.0 ? v : 0.0;
  const double noise = heston_ ? std::sqrt(vp) : vp;
  v += -gamma_ * (vp - theta_) * dt_ + kappa_ * noise * sqrt_dt_ * e2;
}

}  // namespace detail

VariancePath simulate_variance_path(const ModelParams& params, double dt, std::size_t n_steps,
                                    std::uint64_t seed) {
  detail::check_step(params, dt);
  if (n_steps < 1) throw DomainError("n_steps must be at least 1");
  const detail::EulerStepper stepper(params, dt, false);
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal;
  VariancePath path{dt, {}, seed};
  path.values.reserve(n_steps + 1);
  double v = params.theta;
  path.values.push_back(v);
  for (std::size_t i = 0; i < n_steps; ++i) {
    stepper.step_variance(v, normal(engine));
    path.values.push_back(v > 0.0 ? v : 0.0);
  }
  return path;
}

LogReturnPath simulate_log_return_path(const ModelParams& params, double dt, std::size_t n_steps,
                                       std::uint64_t seed, bool include_ito_drift) {
  detail::check_step(params, dt);
  if (n_steps < 1) throw DomainError("n_steps must be at least 1");
  const detail::EulerStepper stepper(params, dt, include_ito_drift);
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal;
  LogReturnPath path;
  path.v = VariancePath{dt, {}, seed};
  path.x.reserve(n_steps + 1);
  path.v.values.reserve(n_steps + 1);
  double x = 0.0;
  double v = params.theta;
  path.x.push_back(x);
  path.v.values.push_back(v);
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double e1 = normal(engine);
    const double e2 = normal(engine);
    stepper.step(x, v, e1, e2);
    path.x.push_back(x);
    path.v.values.push_back(v > 0.0 ? v : 0.0);
  }
  return path;
}

}  // namespace volret
