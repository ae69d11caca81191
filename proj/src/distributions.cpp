#include "volret/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "volret/error.hpp"
#include "volret/quadrature.hpp"
#include "volret/special.hpp"

namespace volret {
namespace {

constexpr double kLnPi = 1.1447298858494002;  // ln(pi)
constexpr double kLn2 = std::numbers::ln2;

// ln(Gamma(b + 1/2) / Gamma(b)), accurate for very large b.
double log_gamma_half_ratio(double b) {
  return -std::log(boost::math::tgamma_delta_ratio(b, 0.5));
}

double log_pdf_heston_pd(const DistributionSpec& s, double z) {
  const double nu = s.alpha - 0.5;
  const double c = std::sqrt(2.0 * s.alpha / (s.theta * s.tau));
  return -nu * kLn2 - 0.5 * kLnPi - std::lgamma(s.alpha) + std::log(c) +
         log_xnu_bessel_k(nu, c * std::abs(z));
}

double log_pdf_heston_jp(const DistributionSpec& s, double z) {
  const double nu = s.alpha - 0.5;
  const double c2 = 2.0 * s.alpha / (s.theta * s.tau);
  const double s2 = c2 + 0.25;
  return -nu * kLn2 - 0.5 * kLnPi - std::lgamma(s.alpha) + s.alpha * std::log(c2) -
         nu * std::log(s2) + log_xnu_bessel_k(nu, std::sqrt(s2) * std::abs(z)) - 0.5 * z;
}

double log_pdf_mult_pd(const DistributionSpec& s, double z) {
  const double b = s.alpha / s.theta + 1.0;
  const double width2 = 2.0 * s.alpha * s.tau;
  return log_gamma_half_ratio(b) - 0.5 * kLnPi - 0.5 * std::log(width2) -
         (b + 0.5) * std::log1p(z * z / width2);
}

double log_pdf_mult_jp(const DistributionSpec& s, double z) {
  const double b = s.alpha / s.theta + 1.0;
  const double width2 = 2.0 * s.alpha * s.tau;
  const double log_w2 = std::log1p(z * z / width2);
  const double arg = 0.5 * std::sqrt(width2) * std::exp(0.5 * log_w2);
  return -2.0 * b * kLn2 - 0.5 * kLnPi - std::lgamma(b) + 0.5 * (b - 0.5) * std::log(width2) -
         0.5 * (b + 0.5) * log_w2 + log_bessel_k(b + 0.5, arg) - 0.5 * z;
}

double log_pdf_normal(const DistributionSpec& s, double z) {
  const double u = z / s.sigma;
  return -0.5 * u * u - std::log(s.sigma) - 0.5 * (kLn2 + kLnPi);
}

}  // namespace

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::heston_pd: return "ga";
    case Kind::heston_jp: return "ga-jp";
    case Kind::mult_pd: return "iga";
    case Kind::mult_jp: return "iga-jp";
    case Kind::normal: return "normal";
  }
  return "?";
}

Kind kind_from_string(std::string_view name) {
  if (name == "ga") return Kind::heston_pd;
  if (name == "ga-jp") return Kind::heston_jp;
  if (name == "iga") return Kind::mult_pd;
  if (name == "iga-jp") return Kind::mult_jp;
  if (name == "normal") return Kind::normal;
  throw ValidationError("unknown distribution family '" + std::string(name) + "'");
}

bool is_joint(Kind kind) { return kind == Kind::heston_jp || kind == Kind::mult_jp; }
bool is_heston(Kind kind) { return kind == Kind::heston_pd || kind == Kind::heston_jp; }
bool is_multiplicative(Kind kind) { return kind == Kind::mult_pd || kind == Kind::mult_jp; }

DistributionSpec DistributionSpec::heston_pd(double alpha, double theta, double tau) {
  return {Kind::heston_pd, alpha, theta, tau, 0.0};
}
DistributionSpec DistributionSpec::heston_jp(double alpha, double theta, double tau) {
  return {Kind::heston_jp, alpha, theta, tau, 0.0};
}
DistributionSpec DistributionSpec::mult_pd(double alpha, double theta, double tau) {
  return {Kind::mult_pd, alpha, theta, tau, 0.0};
}
DistributionSpec DistributionSpec::mult_jp(double alpha, double theta, double tau) {
  return {Kind::mult_jp, alpha, theta, tau, 0.0};
}
DistributionSpec DistributionSpec::normal(double sigma, double tau) {
  return {Kind::normal, 0.0, 0.0, tau, sigma};
}

void DistributionSpec::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau must be positive");
  if (kind == Kind::normal) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
    return;
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("theta must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
  if (is_heston(kind) && !(alpha > 0.5)) {
    throw DomainError("Heston return density needs alpha > 1/2");
  }
}

double DistributionSpec::scale() const {
  return kind == Kind::normal ? sigma : std::sqrt(theta * tau);
}

double log_pdf(const DistributionSpec& spec, double z) {
  switch (spec.kind) {
    case Kind::heston_pd: return log_pdf_heston_pd(spec, z);
    case Kind::heston_jp: return log_pdf_heston_jp(spec, z);
    case Kind::mult_pd: return log_pdf_mult_pd(spec, z);
    case Kind::mult_jp: return log_pdf_mult_jp(spec, z);
    case Kind::normal: return log_pdf_normal(spec, z);
  }
  return -INFINITY;
}

double pdf(const DistributionSpec& spec, double z) { return std::exp(log_pdf(spec, z)); }

double pdf_jp_numerical(const DistributionSpec& spec, double z) {
  spec.validate();
  if (!is_joint(spec.kind)) throw ValidationError("pdf_jp_numerical needs a joint-law kind");
  const double a = spec.alpha;
  const double theta = spec.theta;
  const double tau = spec.tau;
  const bool heston = spec.kind == Kind::heston_jp;

  // Integrate over u = ln v, v = -2x / tau. The Jacobian of x -> u turns
  // f_X(x) dx into g(v) v du, with g the stationary variance density.
  const double shape = heston ? a : a / theta + 1.0;
  const double log_norm = heston ? a * std::log(a / theta) - std::lgamma(a)
                                 : shape * std::log(a) - std::lgamma(shape);
  auto log_fx = [&](double u) {
    const double v = std::exp(u);
    return heston ? log_norm + a * u - (a / theta) * v : log_norm - shape * u - a / v;
  };
  auto log_cond = [&](double u) {
    const double var = std::exp(u) * tau;  // Var(Y | X)
    const double y = z + 0.5 * var;        // y = z - x
    return -0.5 * (kLn2 + kLnPi + std::log(var)) - 0.5 * y * y / var;
  };
  auto log_h = [&](double u) { return log_fx(u) + log_cond(u); };
  auto curvature = [&](double u) {
    const double v = std::exp(u);
    const double prior = heston ? (a / theta) * v : a / v;
    return prior + 0.5 * z * z / (v * tau) + 0.125 * v * tau;
  };

  // log_h is concave in u; centre the quadrature on its maximum.
  const double u0 = std::log(theta);
  const auto [u_mode, neg_peak] = boost::math::tools::brent_find_minima(
      [&](double u) { return -log_h(u); }, u0 - 60.0, u0 + 60.0, 52);
  const double peak = -neg_peak;
  const double width = 1.0 / std::sqrt(curvature(u_mode));

  const auto result = quad::integrate_real_line(
      [&](double u) { return std::exp(log_h(u) - peak); }, u_mode, width, 1e-11);
  if (!(result.error <= 1e-10 * std::abs(result.value))) {
    throw NumericalError("pdf_jp_numerical: quadrature did not reach tolerance",
                         result.error / std::abs(result.value));
  }
  return result.value * std::exp(peak);
}

double theoretical_moment(const DistributionSpec& spec, int order) {
  spec.validate();
  if (order < 2 || order % 2 != 0) {
    throw MomentDoesNotExist("moment order must be a positive even integer");
  }
  const int n = order / 2;
  double double_factorial = 1.0;  // (2n - 1)!!
  for (int k = 1; k <= n; ++k) double_factorial *= 2 * k - 1;

  switch (spec.kind) {
    case Kind::normal:
      return double_factorial * std::pow(spec.sigma, order);
    case Kind::heston_pd: {
      if (order > 12) throw MomentDoesNotExist("Heston moments supported up to order 12");
      // (2n-1)!! E[v^n] tau^n with E[v^n] = theta^n prod_{k<n} (1 + k/alpha)
      double m = double_factorial * std::pow(spec.theta * spec.tau, n);
      for (int k = 1; k < n; ++k) m *= 1.0 + k / spec.alpha;
      return m;
    }
    case Kind::mult_pd: {
      const double tt = spec.theta * spec.tau;
      if (order == 2) return tt;
      if (order == 4) {
        if (!(spec.alpha > spec.theta)) {
          throw MomentDoesNotExist("multiplicative fourth moment needs alpha > theta");
        }
        return 3.0 * spec.alpha * tt * tt / (spec.alpha - spec.theta);
      }
      throw MomentDoesNotExist("multiplicative model: moments above order 4 are not supported "
                               "(power-law tails)");
    }
    case Kind::heston_jp:
    case Kind::mult_jp:
      break;
  }
  throw MomentDoesNotExist("closed-form moments exist only for product-law and normal kinds");
}

double pd_jp_ratio(const DistributionSpec& pd, const DistributionSpec& jp, double z) {
  pd.validate();
  jp.validate();
  const bool matched = pd.alpha == jp.alpha && pd.theta == jp.theta && pd.tau == jp.tau;
  const bool paired = (pd.kind == Kind::mult_pd && jp.kind == Kind::mult_jp) ||
                      (pd.kind == Kind::heston_pd && jp.kind == Kind::heston_jp);
  if (!matched || !paired) {
    throw ValidationError("pd_jp_ratio needs a PD/JP pair of one family with equal parameters");
  }
  const double log_jp = log_pdf(jp, z);
  if (!std::isfinite(log_jp)) throw NumericalError("joint density underflowed");
  return std::exp(log_jp - log_pdf(pd, z));
}

double pd_jp_ratio_expansion(double alpha, double theta, double tau, double z) {
  return 1.0 - 0.5 * z + (z - 2.0) * theta * alpha * tau / (8.0 * (2.0 * alpha + theta));
}

}  // namespace volret
