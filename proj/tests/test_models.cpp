#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "volret/error.hpp"
#include "volret/inference.hpp"
#include "volret/models.hpp"
#include "volret/quadrature.hpp"

using namespace volret;

namespace {

ModelParams heston(double alpha, double rho = 0.0) {
  return ModelParams::from_alpha(Family::heston, 0.05, 1e-4, alpha, rho);
}
ModelParams mult(double alpha, double rho = 0.0) {
  return ModelParams::from_alpha(Family::multiplicative, 0.05, 1e-4, alpha, rho);
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST(ModelParams, AlphaAndConstraints) {
  const ModelParams p{Family::heston, 0.05, 1e-4, 1e-3, 0.0};
  EXPECT_NEAR(p.alpha(), 10.0, 1e-12);
  EXPECT_NO_THROW(p.validate());
  EXPECT_NEAR(heston(2.0).alpha(), 2.0, 1e-12);
  EXPECT_NEAR(mult(3e-4).alpha(), 3e-4, 1e-16);
  EXPECT_THROW(heston(0.9), DomainError);
  EXPECT_NO_THROW(mult(0.9));
  EXPECT_THROW(heston(2.0, 1.5), DomainError);
  EXPECT_THROW((ModelParams{Family::heston, -1.0, 1e-4, 1e-3, 0.0}.validate()), DomainError);
}

TEST(SteadyState, HestonMeanAndVariance) {
  const auto p = heston(2.0);
  const double theta = p.theta;
  auto f = [&](double v) { return v > 0.0 ? steady_state_variance_pdf(p, v) : 0.0; };
  const double norm = quad::integrate(f, 0.0, 50 * theta).value;
  const double m1 = quad::integrate([&](double v) { return v * f(v); }, 0.0, 50 * theta).value;
  const double m2 =
      quad::integrate([&](double v) { return v * v * f(v); }, 0.0, 50 * theta).value;
  EXPECT_NEAR(norm, 1.0, 1e-9);
  EXPECT_NEAR(m1 / theta, 1.0, 1e-6);
  EXPECT_NEAR((m2 - m1 * m1) / (theta * theta / 2.0), 1.0, 1e-6);
}

TEST(SteadyState, MultiplicativeMean) {
  const auto p = mult(3e-4);
  auto f = [&](double v) { return v > 0.0 ? steady_state_variance_pdf(p, v) : 0.0; };
  const double head = quad::integrate([&](double v) { return v * f(v); }, 0.0, p.theta).value;
  const double tail =
      quad::integrate_half_line([&](double v) { return v * f(v); }, p.theta, p.theta, +1).value;
  EXPECT_NEAR((head + tail) / p.theta, 1.0, 1e-6);
}

TEST(SteadyState, CdfMatchesDensity) {
  for (const auto& p : {heston(1.5), mult(2e-4)}) {
    const double v = 1.3 * p.theta;
    const double by_quad = quad::integrate(
        [&](double u) { return u > 0.0 ? steady_state_variance_pdf(p, u) : 0.0; }, 0.0, v).value;
    EXPECT_NEAR(steady_state_variance_cdf(p, v), by_quad, 1e-9);
  }
  EXPECT_THROW(steady_state_variance_pdf(heston(2.0), 0.0), DomainError);
}

TEST(SimulateVariance, ZeroNoiseStaysAtTheta) {
  for (Family family : {Family::heston, Family::multiplicative}) {
    const ModelParams p{family, 0.05, 1e-4, 1e-12, 0.0};
    const auto path = simulate_variance_path(p, 0.1, 5000, 3);
    ASSERT_EQ(path.values.size(), 5001u);
    for (double v : path.values) EXPECT_NEAR(v, 1e-4, 1e-8);
  }
}

TEST(SimulateVariance, StationaryMeanAndVariance) {
  // 2e7 steps span 4e4 relaxation times; the standard error of the mean is about 0.3%.
  const auto p = heston(2.0);
  const auto path = simulate_variance_path(p, 0.1, 20'000'000, 5);
  EXPECT_NEAR(mean(path.values) / p.theta, 1.0, 0.01);
  EXPECT_NEAR(variance(path.values) / (p.theta * p.theta / 2.0), 1.0, 0.03);
}

TEST(SimulateVariance, Positivity) {
  for (const auto& p : {heston(1.01), mult(5e-5)}) {
    const auto path = simulate_variance_path(p, 1.0, 200'000, 9);
    for (double v : path.values) ASSERT_GE(v, 0.0);
  }
}

TEST(SimulateVariance, GuardsStepSize) {
  EXPECT_THROW(simulate_variance_path(heston(2.0), 2.0, 10, 1), StabilityError);
  EXPECT_THROW(simulate_variance_path(heston(2.0), 0.0, 10, 1), DomainError);
  EXPECT_THROW(simulate_variance_path(heston(2.0), -0.1, 10, 1), DomainError);
  EXPECT_THROW(simulate_variance_path(heston(2.0), 0.1, 0, 1), DomainError);
}

TEST(SimulateVariance, Deterministic) {
  const auto a = simulate_variance_path(heston(2.0), 0.1, 10'000, 77);
  const auto b = simulate_variance_path(heston(2.0), 0.1, 10'000, 77);
  const auto c = simulate_variance_path(heston(2.0), 0.1, 10'000, 78);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
  EXPECT_EQ(a.seed, 77u);
}

TEST(SimulateLogReturn, Deterministic) {
  const auto a = simulate_log_return_path(mult(2e-4, -0.3), 0.1, 10'000, 5, true);
  const auto b = simulate_log_return_path(mult(2e-4, -0.3), 0.1, 10'000, 5, true);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.v.values, b.v.values);
}

TEST(SimulateLogReturn, HorizonVarianceIsThetaTau) {
  const auto p = heston(2.0);
  const int days = 20;
  std::vector<double> ends;
  for (std::uint64_t seed = 0; seed < 100'000; ++seed) {
    ends.push_back(simulate_log_return_path(p, 0.1, days * 10, seed, false).x.back());
  }
  double m2 = 0.0;
  for (double x : ends) m2 += x * x;
  m2 /= static_cast<double>(ends.size());
  EXPECT_NEAR(m2 / (p.theta * days), 1.0, 0.02);
}

TEST(SimulateLogReturn, ConstantVolatilityDrift) {
  const ModelParams p{Family::heston, 0.05, 1e-4, 1e-12, 0.0};
  const int days = 20;
  const std::size_t n = 10'000;
  std::vector<double> ends;
  for (std::uint64_t seed = 0; seed < n; ++seed) {
    const auto path = simulate_log_return_path(p, 0.1, days * 10, seed, true);
    for (double v : path.v.values) ASSERT_NEAR(v, p.theta, 1e-12);
    ends.push_back(path.x.back());
  }
  const double target = -p.theta * days / 2.0;
  const double se = std::sqrt(p.theta * days / static_cast<double>(n));
  EXPECT_LT(std::abs(mean(ends) - target), 4 * se);
  EXPECT_NEAR(variance(ends) / (p.theta * days), 1.0, 0.05);
}

TEST(SimulateLogReturn, StationaryLawDoesNotDependOnRho) {
  for (double rho : {-0.5, 0.0, 0.5}) {
    const auto p = heston(2.0, rho);
    // 1e5 samples, burn-in 10/gamma, thinning 1/gamma with dt = 0.1
    const std::size_t burn = 2000, thin = 200, n = 100'000;
    const auto path = simulate_log_return_path(p, 0.1, burn + thin * n, 21, true);
    std::vector<double> v;
    for (std::size_t i = 1; i <= n; ++i) v.push_back(path.v.values[burn + thin * i]);
    const double d =
        ks_statistic(v, [&](double x) { return steady_state_variance_cdf(p, x); });
    EXPECT_LT(d, 0.01) << "rho = " << rho;
  }
}

TEST(SimulateLogReturn, RejectsBadRho) {
  ModelParams p = heston(2.0);
  p.rho = -1.2;
  EXPECT_THROW(simulate_log_return_path(p, 0.1, 10, 1, true), DomainError);
}
