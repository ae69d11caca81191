#pragma once

#include <string_view>

#include "volret/models.hpp"

namespace volret {

// Return densities for tau-day log returns z.
//   heston_pd / mult_pd : product of the stationary volatility law with a normal
//   heston_jp / mult_jp : joint law including the Ito drift -v tau / 2 (skewed by e^{-z/2})
//   normal              : zero-mean normal with standard deviation sigma
enum class Kind { heston_pd, heston_jp, mult_pd, mult_jp, normal };

std::string_view to_string(Kind kind);
// Accepts the CLI names ga, ga-jp, iga, iga-jp, normal.
Kind kind_from_string(std::string_view name);

bool is_joint(Kind kind);
bool is_heston(Kind kind);
bool is_multiplicative(Kind kind);

struct DistributionSpec {
  Kind kind = Kind::heston_pd;
  double alpha = 0.0;  // shape, dimensionless
  double theta = 0.0;  // mean variance per day
  double tau = 1.0;    // return horizon in days
  double sigma = 0.0;  // normal only

  static DistributionSpec heston_pd(double alpha, double theta, double tau);
  static DistributionSpec heston_jp(double alpha, double theta, double tau);
  static DistributionSpec mult_pd(double alpha, double theta, double tau);
  static DistributionSpec mult_jp(double alpha, double theta, double tau);
  static DistributionSpec normal(double sigma, double tau = 1.0);

  // Heston kinds need alpha > 1/2 (finite density at z = 0).
  void validate() const;

  // Standard deviation of z: sqrt(theta * tau), or sigma for the normal.
  double scale() const;
};

double log_pdf(const DistributionSpec& spec, double z);
double pdf(const DistributionSpec& spec, double z);

// Joint density evaluated by direct marginalisation over the variance,
//   phi(z) = \int_{-inf}^0 f_X(x) f_{Y|X}(z - x | x) dx,  X = -v tau / 2,
// with adaptive quadrature. Independent of the closed forms in log_pdf.
double pdf_jp_numerical(const DistributionSpec& spec, double z);

// E[z^order]. Heston: any even order up to 12. Multiplicative: orders 2 and 4
// (4 needs alpha > theta). Normal: any even order. Throws MomentDoesNotExist
// otherwise.
double theoretical_moment(const DistributionSpec& spec, int order);

// phi(z) / psi(z): joint-law density over product-law density for matching
// (alpha, theta, tau).
double pd_jp_ratio(const DistributionSpec& pd, const DistributionSpec& jp, double z);

// Small-z, small alpha*tau expansion of pd_jp_ratio for the multiplicative model:
//   1 - z/2 + (z - 2) theta alpha tau / (8 (2 alpha + theta)).
double pd_jp_ratio_expansion(double alpha, double theta, double tau, double z);

}  // namespace volret
