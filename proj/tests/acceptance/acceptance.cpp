// Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion.
//   acceptance            run every criterion
//   acceptance 3 7        run only criteria 3 and 7
// Exit status is non-zero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "volret/distributions.hpp"
#include "volret/inference.hpp"
#include "volret/kernels.hpp"
#include "volret/models.hpp"
#include "volret/moments.hpp"
#include "volret/quadrature.hpp"
#include "volret/returns.hpp"
#include "volret/rng.hpp"

using namespace volret;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
  Status status;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Status::pass : Status::fail, std::move(detail)}; }

double integrate_moment(const DistributionSpec& s, int power) {
  auto f = [&](double z) { return (power == 0 ? 1.0 : std::pow(z, power)) * pdf(s, z); };
  return quad::integrate_half_line(f, 0.0, s.scale(), -1).value +
         quad::integrate_half_line(f, 0.0, s.scale(), +1).value;
}

DistributionSpec pd_spec(Family f, double alpha, double theta, double tau) {
  return f == Family::heston ? DistributionSpec::heston_pd(alpha, theta, tau)
                             : DistributionSpec::mult_pd(alpha, theta, tau);
}

ReturnSample product_sample(const ModelParams& p, int tau, std::size_t n, std::uint64_t seed) {
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal;
  ReturnSample s{tau, std::vector<double>(n), 0.0};
  for (auto& z : s.values) z = std::sqrt(sample_steady_state_variance(p, engine) * tau) * normal(engine);
  return s;
}

// 1. Normalisation and variance identity over a 3x3x3 grid, both product laws.
constexpr double kNormTol = 1e-8;
constexpr double kVarTol = 1e-6;
constexpr double kC1Seconds = 60;

Outcome criterion1() {
  double worst_norm = 0.0, worst_var = 0.0;
  for (Family f : {Family::heston, Family::multiplicative}) {
    for (double alpha : {1.5, 5.0, 50.0}) {
      for (double theta : {5e-5, 1e-4, 5e-4}) {
        for (double tau : {1.0, 25.0, 250.0}) {
          const auto s = pd_spec(f, alpha, theta, tau);
          worst_norm = std::max(worst_norm, std::abs(integrate_moment(s, 0) - 1.0));
          worst_var = std::max(worst_var, std::abs(integrate_moment(s, 2) / (theta * tau) - 1.0));
        }
      }
    }
  }
  return verdict(worst_norm < kNormTol && worst_var < kVarTol,
                 fmt("max |int psi - 1| = %.2e (tol %.0e), max |int z^2 psi / theta tau - 1| = %.2e (tol %.0e)",
                     worst_norm, kNormTol, worst_var, kVarTol));
}

// 2. Mean realized variance grows with slope theta, both families, two kappa values each.
constexpr double kRvSlopeTol = 0.02;
constexpr double kC2Seconds = 300;

Outcome criterion2() {
  const double theta = 1e-4, gamma = 0.05;
  struct Case {
    Family family;
    double alpha;
  };
  const Case cases[] = {{Family::heston, 2.0}, {Family::heston, 5.0},
                        {Family::multiplicative, 2.0}, {Family::multiplicative, 2e-4}};
  std::string detail;
  bool ok = true;
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    const auto p = ModelParams::from_alpha(c.family, gamma, theta, c.alpha);
    kernels::PathBatch batch;
    batch.n_paths = 10'000;
    batch.n_days = 250;
    batch.steps_per_day = 10;
    batch.seed = seed++;
    const auto rv = kernels::mean_cumulative_rv(p, batch);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < rv.size(); ++i) pts.emplace_back(static_cast<double>(i + 1), rv[i]);
    const double rel = linear_fit(pts).slope / theta - 1.0;
    ok = ok && std::abs(rel) < kRvSlopeTol;
    detail += fmt("%s kappa=%.3g: slope/theta-1 = %+.4f; ", std::string(to_string(c.family)).c_str(),
                  p.kappa, rel);
  }
  return verdict(ok, detail + fmt("tol %.2f", kRvSlopeTol));
}

// 3. Simulated stationary variance against the Gamma / Inverse-Gamma laws.
constexpr double kStationaryKs = 0.01;
constexpr double kC3Seconds = 120;

Outcome criterion3() {
  std::string detail;
  bool ok = true;
  for (const auto& p : {ModelParams::from_alpha(Family::heston, 0.05, 1e-4, 2.0),
                        ModelParams::from_alpha(Family::multiplicative, 0.05, 1e-4, 3e-4)}) {
    kernels::StationaryBatch batch;
    batch.n_paths = 1'000;
    batch.samples_per_path = 100;
    batch.dt = 0.1;
    batch.burn_in = 10.0 / p.gamma;
    batch.thin = 1.0 / p.gamma;
    batch.seed = 300;
    const auto v = kernels::stationary_variance_samples(p, batch);
    const double d = ks_statistic(v, [&](double x) { return steady_state_variance_cdf(p, x); });
    ok = ok && d < kStationaryKs;
    detail += fmt("%s KS = %.4f (n = %zu); ", std::string(to_string(p.family)).c_str(), d, v.size());
  }
  return verdict(ok, detail + fmt("tol %.2f", kStationaryKs));
}

// 4. Product construction sigma sqrt(tau) eps against the closed-form product laws.
constexpr double kProductKs = 0.01;

Outcome criterion4() {
  std::string detail;
  bool ok = true;
  const int tau = 10;
  for (const auto& p : {ModelParams::from_alpha(Family::heston, 0.05, 1e-4, 3.0),
                        ModelParams::from_alpha(Family::multiplicative, 0.05, 1e-4, 2e-4)}) {
    const auto sample = product_sample(p, tau, 100'000, 400);
    const double d = ks_statistic(sample, pd_spec(p.family, p.alpha(), p.theta, tau));
    ok = ok && d < kProductKs;
    detail += fmt("%s KS = %.4f; ", std::string(to_string(p.family)).c_str(), d);
  }
  return verdict(ok, detail + fmt("tol %.2f", kProductKs));
}

// 5. Closed-form moments against quadrature.
constexpr double kMomentTol = 1e-6;

Outcome criterion5() {
  double worst = 0.0;
  for (double alpha : {1.5, 4.0, 30.0}) {
    for (double tau : {1.0, 50.0}) {
      const auto h = DistributionSpec::heston_pd(alpha, 1e-4, tau);
      for (int n = 1; n <= 3; ++n) {
        worst = std::max(worst, std::abs(integrate_moment(h, 2 * n) / theoretical_moment(h, 2 * n) - 1));
      }
      const auto m = DistributionSpec::mult_pd(alpha * 1e-4, 1e-4, tau);
      for (int n = 1; n <= 2; ++n) {
        worst = std::max(worst, std::abs(integrate_moment(m, 2 * n) / theoretical_moment(m, 2 * n) - 1));
      }
    }
  }
  return verdict(worst < kMomentTol, fmt("max relative error = %.2e (tol %.0e)", worst, kMomentTol));
}

// 6. Joint law collapses onto the product law for small theta tau; A.2 expansion.
constexpr double kCollapseTol = 5e-3;
constexpr double kExpansionTol = 1e-4;

Outcome criterion6() {
  std::string detail = "max |phi/psi - 1| over |z| <= 3 sqrt(theta tau):";
  bool ok = true;
  for (double theta_tau : {1e-3, 1e-4, 1e-5, 1e-6}) {
    double worst_h = 0.0, worst_m = 0.0;
    const double theta = theta_tau / 10.0, tau = 10.0;
    const auto hp = DistributionSpec::heston_pd(2.0, theta, tau);
    const auto hj = DistributionSpec::heston_jp(2.0, theta, tau);
    const auto mp = DistributionSpec::mult_pd(3 * theta, theta, tau);
    const auto mj = DistributionSpec::mult_jp(3 * theta, theta, tau);
    for (int i = -300; i <= 300; ++i) {
      const double z = 0.01 * i * std::sqrt(theta_tau);
      worst_h = std::max(worst_h, std::abs(pd_jp_ratio(hp, hj, z) - 1));
      worst_m = std::max(worst_m, std::abs(pd_jp_ratio(mp, mj, z) - 1));
    }
    ok = ok && worst_h < kCollapseTol && worst_m < kCollapseTol;
    detail += fmt(" [%.0e: H %.2e, M %.2e]", theta_tau, worst_h, worst_m);
  }
  const double alpha = 1e-4, theta = 1e-4, tau = 10.0;
  const auto mp = DistributionSpec::mult_pd(alpha, theta, tau);
  const auto mj = DistributionSpec::mult_jp(alpha, theta, tau);
  double worst_e = 0.0, worst_z = 0.0;
  for (int i = -50; i <= 50; ++i) {
    const double z = 0.001 * i;
    const double e = std::abs(pd_jp_ratio(mp, mj, z) - pd_jp_ratio_expansion(alpha, theta, tau, z));
    if (e > worst_e) {
      worst_e = e;
      worst_z = z;
    }
  }
  ok = ok && worst_e < kExpansionTol;
  detail += fmt(" (tol %.0e); expansion: max error %.2e at z = %+.3f (tol %.0e)", kCollapseTol, worst_e,
                worst_z, kExpansionTol);
  return verdict(ok, detail);
}

// 7. MLE recovers (alpha, theta) from N = 1e5 product-law samples.
constexpr double kRecoveryTol = 0.05;

Outcome criterion7() {
  std::string detail;
  bool ok = true;
  const int tau = 10;
  std::uint64_t seed = 700;
  const ModelParams points[] = {
      ModelParams::from_alpha(Family::heston, 0.05, 1e-4, 1.5),
      ModelParams::from_alpha(Family::heston, 0.05, 2e-4, 3.0),
      ModelParams::from_alpha(Family::multiplicative, 0.05, 1e-4, 2e-4),
      ModelParams::from_alpha(Family::multiplicative, 0.05, 2e-4, 8e-4)};
  for (const auto& p : points) {
    const auto sample = product_sample(p, tau, 100'000, seed++);
    const auto fit = mle_fit(sample, p.family == Family::heston ? Kind::heston_pd : Kind::mult_pd);
    const double ea = fit.spec.alpha / p.alpha() - 1.0;
    const double et = fit.spec.theta / p.theta - 1.0;
    ok = ok && fit.converged && std::abs(ea) < kRecoveryTol && std::abs(et) < kRecoveryTol;
    detail += fmt("%s(alpha=%.3g, theta=%.0e): %+.3f, %+.3f; ", std::string(to_string(p.family)).c_str(),
                  p.alpha(), p.theta, ea, et);
  }
  return verdict(ok, detail + fmt("tol %.2f", kRecoveryTol));
}

// 8. Moment-ratio discrimination on simulated Heston data.
constexpr double kHestonRatioTol = 0.02;
constexpr double kMultOffset = 0.05;
constexpr double kC8Seconds = 600;

Outcome criterion8() {
  const double gamma = 0.05, theta = 1e-4, alpha = 2.0;
  const auto p = ModelParams::from_alpha(Family::heston, gamma, theta, alpha);
  const std::size_t days = 2'000'000;
  const int steps_per_day = 10;
  const auto path = simulate_log_return_path(p, 1.0 / steps_per_day, days * steps_per_day, 800, true);
  std::vector<double> daily;
  daily.reserve(days + 1);
  for (std::size_t i = 0; i < path.x.size(); i += steps_per_day) daily.push_back(path.x[i]);
  const auto series = PriceSeries::from_log_prices(daily);
  const double mu = fit_growth_rate(series);

  // reference fits at tau = 1 on the first 1e5 daily returns
  auto r1 = tau_returns(series, 1, mu);
  r1.values.resize(100'000);
  const auto fh = mle_fit(r1, Kind::heston_pd);
  const auto fm = mle_fit(r1, Kind::mult_pd);

  std::vector<ReturnSample> samples;
  for (int tau = 101; tau <= 250; ++tau) samples.push_back(tau_returns(series, tau, mu));
  double worst_h = 0.0;
  std::string per_n;
  for (int n = 1; n <= 3; ++n) {
    double w = 0.0;
    for (const auto& r : moment_ratio_curve(samples, Family::heston, fh.spec.alpha, fh.spec.theta, n)) {
      w = std::max(w, std::abs(r.ratio - 1.0));
    }
    per_n += fmt(" n=%d %.3f", n, w);
    worst_h = std::max(worst_h, w);
  }
  double least_m = INFINITY;
  for (const auto& r : moment_ratio_curve(samples, Family::multiplicative, fm.spec.alpha, fm.spec.theta, 2)) {
    least_m = std::min(least_m, std::abs(r.ratio - 1.0));
  }
  const bool ok = worst_h < kHestonRatioTol && least_m > kMultOffset;
  return verdict(ok, fmt("simulated Heston alpha=%.1f gamma=%.2f, %zu days; tau=1 fits: H alpha=%.3g, "
                         "M alpha/theta=%.3g; tau*gamma in (5, 12.5]: Heston max |ratio-1|%s (tol %.2f); "
                         "Mult n=2 min |ratio-1| = %.3f (need > %.2f)",
                         alpha, gamma, days, fh.spec.alpha, fm.spec.alpha / fm.spec.theta, per_n.c_str(),
                         kHestonRatioTol, least_m, kMultOffset));
}

// 9. Relaxation fit on synthetic curves.
constexpr double kRelaxExactTol = 1e-6;
constexpr double kRelaxNoisyTol = 0.05;

Outcome criterion9() {
  std::vector<RatioPoint> curve;
  for (int t = 1; t <= 100; ++t) curve.push_back({t, 1.0 + 0.5 * std::exp(-0.1 * t)});
  const auto exact = fit_relaxation(curve);
  const double ea = std::abs(exact.a - 0.1), eb = std::abs(exact.b - 0.5);
  double worst_a = 0.0, worst_b = 0.0;
  for (std::uint64_t seed = 900; seed < 910; ++seed) {
    auto engine = make_engine(seed);
    std::normal_distribution<double> noise(0.0, 0.01);
    auto noisy = curve;
    for (auto& p : noisy) p.ratio *= 1.0 + noise(engine);
    const auto fit = fit_relaxation(noisy);
    worst_a = std::max(worst_a, std::abs(fit.a / 0.1 - 1.0));
    worst_b = std::max(worst_b, std::abs(fit.b / 0.5 - 1.0));
  }
  return verdict(ea < kRelaxExactTol && eb < kRelaxExactTol && worst_a < kRelaxNoisyTol &&
                     worst_b < kRelaxNoisyTol,
                 fmt("noiseless |da| = %.1e, |db| = %.1e (tol %.0e); 1%% noise, 10 realisations: max "
                     "rel error a %.3f, b %.3f (tol %.2f)",
                     ea, eb, kRelaxExactTol, worst_a, worst_b, kRelaxNoisyTol));
}

// 10. Optional data check against a user-supplied DJIA daily-close CSV.
constexpr double kDjiaSlope = 9.578e-5;
constexpr double kDjiaTol = 0.10;

Outcome criterion10() {
  std::filesystem::path file;
  if (const char* env = std::getenv("VOLRET_DJIA_CSV")) file = env;
  if (file.empty() || !std::filesystem::exists(file)) {
    return {Status::skip, "no data file (set VOLRET_DJIA_CSV to a date,close CSV)"};
  }
  const auto series = load_price_series(file);
  std::vector<int> taus(100);
  for (int i = 0; i < 100; ++i) taus[i] = i + 1;
  const auto curve = realized_variance_curve(series, fit_growth_rate(series), taus);
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : curve) pts.emplace_back(p.tau, p.mean_rv);
  const double slope = linear_fit(pts).slope;
  return verdict(std::abs(slope / kDjiaSlope - 1.0) < kDjiaTol,
                 fmt("RV slope %.4e vs %.4e (tol %.0f%%), N = %zu", slope, kDjiaSlope, 100 * kDjiaTol,
                     series.size()));
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
  double max_seconds;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "normalization and variance identity", criterion1, kC1Seconds},
      {2, "mean-RV linearity", criterion2, kC2Seconds},
      {3, "stationary-law agreement", criterion3, kC3Seconds},
      {4, "product-distribution construction", criterion4, 0},
      {5, "moment closed forms", criterion5, 0},
      {6, "JP-vs-PD collapse and ratio expansion", criterion6, 0},
      {7, "MLE parameter recovery", criterion7, 0},
      {8, "discrimination reproduction", criterion8, kC8Seconds},
      {9, "relaxation fit", criterion9, 0},
      {10, "optional DJIA RV slope", criterion10, 0},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Status::fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.max_seconds > 0 && secs > c.max_seconds && o.status == Status::pass) {
      o = {Status::fail, o.detail + fmt("; runtime over %.0f s", c.max_seconds)};
    }
    const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
    std::printf("[%s] criterion %d, %s: %s (%.1f s)\n", tag, c.id, c.title, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (o.status == Status::fail) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
