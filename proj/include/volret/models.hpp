#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "volret/rng.hpp"

namespace volret {

enum class Family { heston, multiplicative };

std::string_view to_string(Family family);

// Mean-reverting variance SDE
//   dv = -gamma (v - theta) dt + kappa * g(v) dW2,   g(v) = sqrt(v) (Heston) or v (multiplicative)
// coupled to returns by dW2 = rho dW1 + sqrt(1 - rho^2) dZ.
struct ModelParams {
  Family family = Family::heston;
  double gamma = 0.05;  // 1/day
  double theta = 1e-4;  // 1/day
  double kappa = 1e-3;
  double rho = 0.0;

  // alpha = 2 gamma theta / kappa^2
  double alpha() const { return 2.0 * gamma * theta / (kappa * kappa); }

  // Throws DomainError when a field is out of range (Heston needs alpha > 1).
  void validate() const;

  static ModelParams from_alpha(Family family, double gamma, double theta, double alpha,
                                double rho = 0.0);
};

struct VariancePath {
  double dt = 0.0;
  std::vector<double> values;  // v_0 .. v_n, v_0 = theta
  std::uint64_t seed = 0;
};

struct LogReturnPath {
  std::vector<double> x;  // x_0 = 0
  VariancePath v;
};

// Stationary law of v: Gamma(shape alpha, scale theta/alpha) for Heston,
// Inverse-Gamma(shape alpha/theta + 1, scale alpha) for multiplicative.
double steady_state_variance_pdf(const ModelParams& params, double v);
double steady_state_variance_cdf(const ModelParams& params, double v);
double sample_steady_state_variance(const ModelParams& params, Engine& engine);

// Full-truncation Euler-Maruyama from v_0 = theta. Requires dt * gamma < 0.1.
VariancePath simulate_variance_path(const ModelParams& params, double dt, std::size_t n_steps,
                                    std::uint64_t seed);

// Coupled Euler step for (x, v). Without the Ito drift, dx = sqrt(v) dW1.
LogReturnPath simulate_log_return_path(const ModelParams& params, double dt, std::size_t n_steps,
                                       std::uint64_t seed, bool include_ito_drift);

// Engine-level stepping shared by the single-path API and the batch kernels.
namespace detail {
void check_step(const ModelParams& params, double dt);

class EulerStepper {
public:
  EulerStepper(const ModelParams& params, double dt, bool include_ito_drift);

  // Advances (x, v) by one step using two independent standard normals.
  void step(double& x, double& v, double e1, double e2) const;
  // Variance only.
  void step_variance(double& v, double e2) const;

private:
  double gamma_, theta_, kappa_, dt_, sqrt_dt_, rho_, rho_c_;
  bool heston_;
  bool ito_;
};
}  // namespace detail

}  // namespace volret
