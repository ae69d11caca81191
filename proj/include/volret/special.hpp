#pragma once

namespace volret {

// Natural log of the modified Bessel function of the second kind, ln K_nu(x).
//
// Works for orders up to ~1e6 and arguments where K_nu itself would over- or
// underflow a double. Negative orders are folded by K_{-nu} = K_nu.
// Throws DomainError for x <= 0 or non-finite input.
double log_bessel_k(double nu, double x);

// ln(x^nu K_nu(x)). Finite at x = 0 for nu > 0 (limit 2^{nu-1} Gamma(nu)).
double log_xnu_bessel_k(double nu, double x);

}  // namespace volret
