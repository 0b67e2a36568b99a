#include "thinwg/specfun.hpp"

#include <cmath>
#include <limits>

namespace thinwg {
namespace {

constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

// Ascending series. Returns J0 and, when requested, the series part of Y0.
struct SeriesSums {
  long double j0 = 0.0L;
  long double y0_tail = 0.0L;  // sum_{m>=1} (-1)^{m+1} H_m (x^2/4)^m / (m!)^2
};

SeriesSums ascending_series(double x) {
  const long double q = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;  // (-q)^m / (m!)^2
  long double harmonic = 0.0L;
  SeriesSums sums;
  sums.j0 = 1.0L;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (static_cast<long double>(m) * m);
    harmonic += 1.0L / m;
    sums.j0 += term;
    sums.y0_tail -= harmonic * term;
    if (std::fabs(term) * (1.0L + harmonic) < 1e-21L) break;
  }
  return sums;
}

// Hankel's expansion: J0 = A (P cos chi - Q sin chi), Y0 = A (P sin chi + Q cos chi).
struct AsymptoticParts {
  double p = 1.0;
  double q = 0.0;
};

AsymptoticParts asymptotic_pq(double x) {
  AsymptoticParts out;
  out.p = 0.0;
  double a = 1.0;  // a_k(0) / x^k
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      a *= -(odd * odd) / (8.0 * k * x);
    }
    const double mag = std::fabs(a);
    if (mag > prev) break;  // series started diverging
    prev = mag;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      out.p += sign * a;
    } else {
      out.q += sign * a;
    }
    if (mag < 1e-18) break;
  }
  return out;
}

}  // namespace

double bessel_j0(double x) {
  require_finite(x, "bessel_j0");
  if (x < 0.0) throw DomainError("bessel_j0: negative argument");
  if (x <= kBesselSeriesLimit) return static_cast<double>(ascending_series(x).j0);
  const auto pq = asymptotic_pq(x);
  const double chi = x - 0.25 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (pq.p * std::cos(chi) - pq.q * std::sin(chi));
}

double bessel_y0(double x) {
  require_finite(x, "bessel_y0");
  if (x <= 0.0) throw DomainError("bessel_y0: argument must be positive");
  if (x <= kBesselSeriesLimit) {
    const auto s = ascending_series(x);
    const long double two_over_pi = 2.0L / std::numbers::pi_v<long double>;
    const long double log_term = std::log(static_cast<long double>(x) / 2.0L) + kEulerGamma;
    return static_cast<double>(two_over_pi * (log_term * s.j0 + s.y0_tail));
  }
  const auto pq = asymptotic_pq(x);
  const double chi = x - 0.25 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (pq.p * std::sin(chi) + pq.q * std::cos(chi));
}

Complex hankel1_0(double x) {
  require_finite(x, "hankel1_0");
  if (x <= 0.0) throw DomainError("hankel1_0: argument must be positive");
  if (x <= kBesselSeriesLimit) {
    return {bessel_j0(x), bessel_y0(x)};
  }
  const auto pq = asymptotic_pq(x);
  const double chi = x - 0.25 * kPi;
  const double amp = std::sqrt(2.0 / (kPi * x));
  const double c = std::cos(chi);
  const double s = std::sin(chi);
  return {amp * (pq.p * c - pq.q * s), amp * (pq.p * s + pq.q * c)};
}

Complex hankel_green(double k, double n_cl, double r) {
  if (!(r > 0.0)) throw DomainError("hankel_green: evaluation point coincides with the source");
  if (!(k > 0.0) || !(n_cl > 0.0)) throw DomainError("hankel_green: k and n_cl must be positive");
  return Complex(0.0, -0.25) * hankel1_0(k * n_cl * r);
}

}  // namespace thinwg
