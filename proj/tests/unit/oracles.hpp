#pragma once

#include <cmath>
#include <complex>
#include <vector>

// Reference implementations that share no code with the library.
namespace oracle {

// Ascending series of J0 in long double; accurate for x <= 20.
inline long double j0_series(long double x) {
  const long double q = -x * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<long double>(m) * m);
    sum += term;
    if (std::abs(term) < 1e-30L * std::abs(sum)) break;
  }
  return sum;
}

// Y0 = (2/pi) [(ln(x/2) + gamma) J0(x) + sum_m (-1)^{m+1} H_m (x^2/4)^m / (m!)^2].
inline long double y0_series(long double x) {
  const long double gamma = 0.57721566490153286060651209L;
  const long double pi = 3.14159265358979323846264338L;
  const long double q = x * x / 4.0L;
  long double term = 1.0L;
  long double harmonic = 0.0L;
  long double sum = 0.0L;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (static_cast<long double>(m) * m);
    harmonic += 1.0L / m;
    sum -= term * harmonic;
    if (std::abs(term * harmonic) < 1e-30L * std::abs(sum)) break;
  }
  return 2.0L / pi * ((std::log(x / 2.0L) + gamma) * j0_series(x) + sum);
}

// -(i/4) H0(k n r) from the standard library Bessel functions.
inline std::complex<double> hankel_green_std(double k, double n, double r) {
  const double a = k * n * r;
  const std::complex<double> h0(std::cyl_bessel_j(0.0, a), std::cyl_neumann(0.0, a));
  return std::complex<double>(0.0, -0.25) * h0;
}

// Number of sign changes of g on a uniform grid of [lo, hi].
template <class F>
int sign_changes(F g, double lo, double hi, int n) {
  int count = 0;
  double prev = g(lo);
  for (int i = 1; i <= n; ++i) {
    const double cur = g(lo + (hi - lo) * i / n);
    if (std::isfinite(prev) && std::isfinite(cur) && ((prev < 0.0) != (cur < 0.0))) ++count;
    prev = cur;
  }
  return count;
}

}  // namespace oracle
