#include "volret/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "volret/error.hpp"

namespace volret {
namespace {

constexpr double kEps = 1e-17;
constexpr int kMaxIter = 100000;
// Orders at or above this use the uniform (Debye) expansion.
constexpr double kDebyeOrder = 25.0;
constexpr int kDebyeTerms = 14;

// Polynomials u_k(t) of the uniform asymptotic expansion, built from
//   u_{k+1} = t^2 (1 - t^2) u_k' / 2 + 1/8 \int_0^t (1 - 5 s^2) u_k(s) ds.
// Coefficients are stored by ascending power of t.
std::vector<std::vector<double>> build_debye_polynomials() {
  std::vector<std::vector<double>> u(kDebyeTerms);
  u[0] = {1.0};
  for (int k = 0; k + 1 < kDebyeTerms; ++k) {
    const auto& p = u[k];
    std::vector<double> next(p.size() + 3, 0.0);
    for (std::size_t j = 1; j < p.size(); ++j) {
      const double d = j * p[j];  // coefficient of t^{j-1} in u_k'
      next[j + 1] += 0.5 * d;
      next[j + 3] -= 0.5 * d;
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
      next[j + 1] += p[j] / (8.0 * (j + 1));
      next[j + 3] -= 5.0 * p[j] / (8.0 * (j + 3));
    }
    u[k + 1] = std::move(next);
  }
  return u;
}

const std::vector<std::vector<double>>& debye_polynomials() {
  static const auto table = build_debye_polynomials();
  return table;
}

double log_bessel_k_debye(double nu, double x) {
  const double z = x / nu;
  const double root = std::sqrt(1.0 + z * z);
  const double t = 1.0 / root;
  const double eta = root + std::log(z / (1.0 + root));

  double series = 0.0;
  double nu_pow = 1.0;
  double sign = 1.0;
  // Individual u_k(t) can pass near zero, so a small term says nothing about the
  // next one; for nu >= kDebyeOrder the full table is well inside convergence.
  for (const auto& poly : debye_polynomials()) {
    double val = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) val = val * t + *it;
    series += sign * val / nu_pow;
    nu_pow *= nu;
    sign = -sign;
  }
  return 0.5 * std::log(std::numbers::pi / (2.0 * nu)) - nu * eta - 0.5 * std::log(root) +
         std::log(series);
}

// 1/Gamma(1 + mu), 1/Gamma(1 - mu) and the two Temme combinations.
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
  TemmeGammas g{};
  g.gampl = 1.0 / std::tgamma(1.0 + mu);
  g.gammi = 1.0 / std::tgamma(1.0 - mu);
  g.gam2 = 0.5 * (g.gammi + g.gampl);
  if (std::abs(mu) > 1e-3) {
    g.gam1 = (g.gammi - g.gampl) / (2.0 * mu);
  } else {
    // odd part of the Taylor series of 1/Gamma(1 + mu)
    constexpr double c2 = 0.5772156649015329;
    constexpr double c4 = -0.0420026350340952;
    constexpr double c6 = -0.0421977345555443;
    const double m2 = mu * mu;
    g.gam1 = -(c2 + m2 * (c4 + m2 * c6));
  }
  return g;
}

// ln K_mu(x) and K_{mu+1}(x)/K_mu(x) for |mu| <= 1/2.
struct LowOrder {
  double log_k;
  double ratio;
};

LowOrder low_order_temme(double mu, double x) {
  const double x2 = 0.5 * x;
  const double pimu = std::numbers::pi * mu;
  const double fact = std::abs(pimu) < 1e-15 ? 1.0 : pimu / std::sin(pimu);
  double d = -std::log(x2);
  double e = mu * d;
  const double fact2 = std::abs(e) < 1e-15 ? 1.0 : std::sinh(e) / e;
  const auto g = temme_gammas(mu);
  double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / g.gampl;
  double q = 0.5 / (e * g.gammi);
  double c = 1.0;
  d = x2 * x2;
  double sum1 = p;
  const double mu2 = mu * mu;
  int i = 1;
  for (; i <= kMaxIter; ++i) {
    ff = (i * ff + p + q) / (i * i - mu2);
    c *= d / i;
    p /= i - mu;
    q /= i + mu;
    const double del = c * ff;
    sum += del;
    sum1 += c * (p - i * ff);
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  if (i > kMaxIter) throw NumericalError("log_bessel_k: Temme series did not converge");
  const double k_mu = sum;
  const double k_mu1 = sum1 * 2.0 / x;
  return {std::log(k_mu), k_mu1 / k_mu};
}

LowOrder low_order_steed(double mu, double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu * mu;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i <= kMaxIter; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i > kMaxIter) throw NumericalError("log_bessel_k: continued fraction did not converge");
  h *= a1;
  const double log_k = 0.5 * std::log(std::numbers::pi / (2.0 * x)) - x - std::log(s);
  return {log_k, (mu + x + 0.5 - h) / x};
}

}  // namespace

double log_bessel_k(double nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(nu)) {
    throw DomainError("log_bessel_k: requires finite nu and x > 0");
  }
  nu = std::abs(nu);
  if (nu >= kDebyeOrder) return log_bessel_k_debye(nu, x);

  const int steps = static_cast<int>(nu + 0.5);
  const double mu = nu - steps;
  const auto base = x < 2.0 ? low_order_temme(mu, x) : low_order_steed(mu, x);

  // Forward recurrence K_{m+1} = 2m/x K_m + K_{m-1}, carried as ratios.
  double log_k = base.log_k;
  double ratio = base.ratio;
  for (int k = 1; k <= steps; ++k) {
    log_k += std::log(ratio);
    ratio = 2.0 * (mu + k) / x + 1.0 / ratio;
  }
  return log_k;
}

double log_xnu_bessel_k(double nu, double x) {
  nu = std::abs(nu);
  if (x == 0.0) {
    if (nu == 0.0) return INFINITY;
    return (nu - 1.0) * std::numbers::ln2 + std::lgamma(nu);
  }
  return nu * std::log(x) + log_bessel_k(nu, x);
}

}  // namespace volret
