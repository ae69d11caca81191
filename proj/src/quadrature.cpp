#include "volret/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>

#include "volret/error.hpp"

namespace volret::quad {
namespace {
constexpr unsigned kMaxDepth = 15;
constexpr int kMaxSegments = 2000;
constexpr int kQuietSegments = 3;

Result integrate_depth(const Integrand& f, double a, double b, double rel_tol, unsigned depth) {
  Result r;
  if (a == b) return r;
  double l1 = 0.0;
  // Map to [0, 1]: boost's error floor does not scale with the interval width.
  const double w = b - a;
  auto unit = [&](double t) { return f(a + w * t); };
  r.value = w * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                    unit, 0.0, 1.0, depth, rel_tol, &r.error, &l1);
  r.error *= std::abs(w);
  if (!std::isfinite(r.value)) throw NumericalError("quadrature produced a non-finite value");
  return r;
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, double rel_tol) {
  return integrate_depth(f, a, b, rel_tol, kMaxDepth);
}

Result integrate_half_line(const Integrand& f, double start, double scale, int direction,
                           double rel_tol) {
  if (!(scale > 0.0)) throw DomainError("integrate_half_line: scale must be positive");
  Result total;
  double inner = 0.0;
  double width = 0.25 * scale;
  int quiet = 0;
  for (int seg = 0; seg < kMaxSegments; ++seg) {
    const double outer = inner + width;
    const double a = direction > 0 ? start + inner : start - outer;
    const double b = direction > 0 ? start + outer : start - inner;
    if (!std::isfinite(a) || !std::isfinite(b)) break;
    // Tolerance is relative to the running total, not to the segment, so
    // far-tail segments are not refined down to their own noise.
    auto piece = integrate_depth(f, a, b, rel_tol, 0);
    const double mag = std::abs(piece.value) + piece.error;
    if (mag > 1e-17 * std::abs(total.value)) {
      const double seg_tol =
          total.value == 0.0 ? rel_tol : std::min(1e-3, rel_tol * std::abs(total.value) / mag);
      piece = integrate_depth(f, a, b, std::max(rel_tol, seg_tol), kMaxDepth);
    }
    total.value += piece.value;
    total.error += piece.error;
    // Require a few consecutive negligible segments past a few scales out.
    if (inner >= 4.0 * scale && std::abs(piece.value) <= 1e-18 * std::abs(total.value)) {
      if (++quiet >= kQuietSegments) return total;
    } else {
      quiet = 0;
    }
    inner = outer;
    if (inner >= 2.0 * scale) width = inner;
  }
  throw NumericalError("integrate_half_line: tail did not become negligible", total.error);
}

Result integrate_real_line(const Integrand& f, double center, double scale, double rel_tol) {
  const auto left = integrate_half_line(f, center, scale, -1, rel_tol);
  const auto right = integrate_half_line(f, center, scale, +1, rel_tol);
  return {left.value + right.value, left.error + right.error};
}

}  // namespace volret::quad
