#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "thinwg/common.hpp"

namespace thinwg {

/// Tolerances shared by every spectral integral in the library.
struct QuadratureOptions {
  double tolerance = 1e-8;        // absolute, per component
  double tau_refine_step = 1e-3;  // initial panel width near tau = 0 and tau = n_cl, in units of n_cl
  int max_depth = 40;
  std::size_t max_panels = 200000;
};

/// Parameters of one integral over tau in [0, inf).
///
/// The integrand is assumed to carry the factor exp(i k sqrt(n_cl^2 - tau^2) |z - z0|),
/// which makes the tail beyond n_cl decay; z_dist is the smallest |z - z0| among the
/// integrated components and sets the truncation point. A positive tau_max overrides it.
struct SpectralIntegrandContext {
  double k = 1.0;
  double n_cl = 1.0;
  double z_dist = 0.0;
  double tolerance = 1e-8;
  double tau_refine_step = 1e-3;
  int max_depth = 40;
  std::size_t max_panels = 200000;
  double tau_max = 0.0;

  static SpectralIntegrandContext from(double k, double n_cl, double z_dist,
                                       const QuadratureOptions& opts) {
    SpectralIntegrandContext ctx;
    ctx.k = k;
    ctx.n_cl = n_cl;
    ctx.z_dist = z_dist;
    ctx.tolerance = opts.tolerance;
    ctx.tau_refine_step = opts.tau_refine_step;
    ctx.max_depth = opts.max_depth;
    ctx.max_panels = opts.max_panels;
    return ctx;
  }
};

/// Vector-valued integrand. `root` is sqrt_branch(n_cl, tau), supplied by the
/// integrator without cancellation so callers never recompute n_cl^2 - tau^2.
using SpectralIntegrand = std::function<void(double tau, Complex root, std::span<Complex> out)>;
using ScalarSpectralIntegrand = std::function<Complex(double tau, Complex root)>;

struct SpectralResult {
  std::vector<Complex> values;
  double error = 0.0;  // sum over panels of the max-component Kronrod/Gauss gap
  std::size_t panels = 0;
  std::size_t evaluations = 0;
};

/// sqrt(n_cl^2 - tau^2) on the outgoing branch: non-negative real below n_cl,
/// i sqrt(tau^2 - n_cl^2) above it.
Complex sqrt_branch(double n_cl, double tau);

/// Upper truncation point of the tau integral for the given context.
double spectral_tail_limit(const SpectralIntegrandContext& ctx);

/// Integrates f over tau in [0, tau_max]. Below n_cl the variable tau = n_cl sin(theta)
/// is used and above it tau = n_cl cosh(u), so the inverse square root at tau = n_cl is
/// absorbed by the Jacobian and neither endpoint is ever sampled. Panels are refined
/// with a 15-point Gauss-Kronrod rule until the summed error estimate is below
/// ctx.tolerance. Throws QuadratureError when a panel exceeds ctx.max_depth.
SpectralResult integrate_spectral(std::size_t dim, const SpectralIntegrand& f,
                                  const SpectralIntegrandContext& ctx);

Complex integrate_spectral(const ScalarSpectralIntegrand& f, const SpectralIntegrandContext& ctx);

/// exp(i k root dz) / (i root): the propagation kernel shared by G, H and the
/// correction fields.
inline Complex propagation_kernel(double k, Complex root, double dz) {
  if (root.imag() == 0.0) {
    const double phase = k * root.real() * dz;
    return Complex(std::sin(phase), -std::cos(phase)) / root.real();
  }
  // root = i b, exp(-k b dz) / (i * i b)
  const double b = root.imag();
  return Complex(-std::exp(-k * b * dz) / b, 0.0);
}

}  // namespace thinwg
