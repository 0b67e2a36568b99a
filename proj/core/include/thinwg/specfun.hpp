#pragma once

#include "thinwg/common.hpp"

namespace thinwg {

// Bessel functions of order zero for real arguments. Below kBesselSeriesLimit
// the ascending series is summed in extended precision, above it the Hankel
// asymptotic expansion is used; both branches are accurate to ~1e-12 absolute.
inline constexpr double kBesselSeriesLimit = 20.0;

/// J0(x) for x >= 0. Throws DomainError on negative or non-finite input.
double bessel_j0(double x);

/// Y0(x) for x > 0. Throws DomainError on x <= 0 or non-finite input.
double bessel_y0(double x);

/// Outgoing Hankel function H0^(1)(x) = J0(x) + i Y0(x), x > 0.
Complex hankel1_0(double x);

/// Free-space Green function of  Delta u + k^2 n_cl^2 u = delta  at distance r:
/// -(i/4) H0^(1)(k n_cl r). Throws DomainError at r == 0.
Complex hankel_green(double k, double n_cl, double r);

}  // namespace thinwg
