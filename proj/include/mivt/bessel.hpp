#pragma once

namespace mivt {

/// Modified Bessel function of the third kind K_nu(x) for real order nu and
/// x > 0. Relative error is at or below 1e-10 over the supported range.
/// Throws std::domain_error for x <= 0 and mivt::numeric_error when the value
/// would overflow or underflow a double (x beyond ~705, or tiny x at large
/// |nu|).
double bessel_k(double nu, double x);

/// log K_nu(x), usable where K_nu itself would underflow (large x). For
/// x <= 650 this is log(bessel_k(nu, x)); beyond that a uniform asymptotic
/// expansion is used.
double log_bessel_k(double nu, double x);

}  // namespace mivt
