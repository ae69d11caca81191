#pragma once

#include <functional>

namespace volret::quad {

using Integrand = std::function<double(double)>;

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

// Adaptive Gauss-Kronrod on a finite interval.
Result integrate(const Integrand& f, double a, double b, double rel_tol = 1e-10);

// \int_start^{+inf} f (direction = +1) or \int_{-inf}^start f (direction = -1).
// Walks outward in segments whose widths double, starting at `scale`, and
// stops once a segment no longer changes the total at double precision.
Result integrate_half_line(const Integrand& f, double start, double scale, int direction,
                           double rel_tol = 1e-10);

// \int_{-inf}^{+inf} f, split at `center`.
Result integrate_real_line(const Integrand& f, double center, double scale,
                           double rel_tol = 1e-10);

}  // namespace volret::quad
