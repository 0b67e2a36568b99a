#include "thinwg/waveguide.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

namespace thinwg {
namespace {

constexpr double kInvTwoPi = 1.0 / (2.0 * kPi);

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// sin(Q r) / Q with the Q -> 0 limit r.
double sin_over(double big_q, double r) {
  const double arg = big_q * r;
  if (std::abs(arg) < 1e-8) return r * (1.0 - arg * arg / 6.0);
  return std::sin(arg) / big_q;
}

// sinh(q r) / q with the q -> 0 limit r.
double sinh_over(double q, double r) {
  const double arg = q * r;
  if (std::abs(arg) < 1e-8) return r * (1.0 + arg * arg / 6.0);
  return std::sinh(arg) / q;
}

double bisect(double lo, double hi, double target, double (*g)(double)) {
  double g_lo = g(lo) - target;
  const double g_hi = g(hi) - target;
  if (!(g_lo < 0.0 && g_hi > 0.0)) {
    throw std::logic_error("guided_roots: bracket [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "] has no sign change");
  }
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g(mid) - target;
    if (g_mid < 0.0) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double sym_root_fn(double y) { return y / std::abs(std::cos(y)); }
double anti_root_fn(double y) { return y / std::abs(std::sin(y)); }

// Guided mode at a root y = h sqrt(lambda); decay rate q = sqrt(d^2 - lambda).
double guided_mode(double x, double y, double q, double h, Parity parity) {
  const double ax = std::abs(x);
  if (parity == Parity::Sym) {
    if (ax <= h) return std::cos(x * y / h);
    return std::cos(y) * std::exp(-q * (ax - h));
  }
  if (ax <= h) return std::sin(x * y / h);
  return sgn(x) * std::sin(y) * std::exp(-q * (ax - h));
}

struct PointGeometry {
  double x = 0.0;
  double ax = 0.0;
  double r = 0.0;  // |x| - h
  double sign = 0.0;
  bool inside = false;
  double dz = 0.0;
};

PointGeometry make_geometry(double x, double dz, double h) {
  PointGeometry g;
  g.x = x;
  g.ax = std::abs(x);
  g.r = g.ax - h;
  g.sign = sgn(x);
  g.inside = g.ax <= h;
  g.dz = dz;
  return g;
}

// Modes scaled by k tau so that the continuous density becomes a ratio of
// bounded quantities: u = k tau v, and the integrand is u(x) u(x0) / D.
struct ScaledModes {
  double kt = 0.0;
  double s = 0.0;  // h sqrt(lambda)
  double sin_s = 0.0;
  double cos_s = 0.0;
  double a = 0.0;  // sqrt(lambda) sin(s)
  double b = 0.0;  // sqrt(lambda) cos(s)
  double h = 0.0;
  double d_sym = 0.0;   // k^2 tau^2 + d^2 sin^2 s
  double d_anti = 0.0;  // k^2 tau^2 + d^2 cos^2 s

  ScaledModes(double k, double tau, double scaled_d2, double h_) : h(h_) {
    kt = k * tau;
    s = std::sqrt(scaled_d2 + h * h * kt * kt);
    sin_s = std::sin(s);
    cos_s = std::cos(s);
    const double root_lambda = s / h;
    a = root_lambda * sin_s;
    b = root_lambda * cos_s;
    d_sym = a * a + kt * kt * cos_s * cos_s;
    d_anti = b * b + kt * kt * sin_s * sin_s;
  }

  void at(const PointGeometry& g, double& u_sym, double& u_anti) const {
    if (g.inside) {
      const double arg = g.x * s / h;
      u_sym = kt * std::cos(arg);
      u_anti = kt * std::sin(arg);
      return;
    }
    const double phase = kt * g.r;
    const double sp = std::sin(phase);
    const double cp = std::cos(phase);
    u_sym = -a * sp + kt * cos_s * cp;
    u_anti = g.sign * (b * sp + kt * sin_s * cp);
  }
};

void check_distinct(Point2 p, Point2 source) {
  if (p.x == source.x && p.z == source.z) {
    throw DomainError("green: field point coincides with the source");
  }
}

// Continuous parts for many points; out[2i] symmetric, out[2i+1] antisymmetric.
std::vector<Complex> continuous_many(std::span<const Point2> points, Point2 source,
                                     const WaveguideParams& params, double k,
                                     const QuadratureOptions& opts) {
  const double h = params.h;
  const double scaled_d2 = params.scaled_d2(k);
  std::vector<PointGeometry> geoms;
  geoms.reserve(points.size());
  double z_dist = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    check_distinct(p, source);
    const double dz = std::abs(p.z - source.z);
    z_dist = std::min(z_dist, dz);
    geoms.push_back(make_geometry(p.x, dz, h));
  }
  const PointGeometry src = make_geometry(source.x, 0.0, h);

  const SpectralIntegrand integrand = [&](double tau, Complex root, std::span<Complex> out) {
    const ScaledModes modes(k, tau, scaled_d2, h);
    double us0 = 0.0;
    double ua0 = 0.0;
    modes.at(src, us0, ua0);
    const double ws = kInvTwoPi * us0 / modes.d_sym;
    const double wa = kInvTwoPi * ua0 / modes.d_anti;
    for (std::size_t i = 0; i < geoms.size(); ++i) {
      double us = 0.0;
      double ua = 0.0;
      modes.at(geoms[i], us, ua);
      const Complex kernel = propagation_kernel(k, root, geoms[i].dz);
      out[2 * i] = (ws * us) * kernel;
      out[2 * i + 1] = (wa * ua) * kernel;
    }
  };
  const auto ctx = SpectralIntegrandContext::from(k, params.n_cl, z_dist, opts);
  return integrate_spectral(2 * points.size(), integrand, ctx).values;
}

}  // namespace

void WaveguideParams::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("WaveguideParams: h must be positive");
  if (!(nbar > 0.0) || !std::isfinite(nbar)) {
    throw DomainError("WaveguideParams: nbar must be positive");
  }
  if (!(n_cl > 0.0) || !std::isfinite(n_cl)) {
    throw DomainError("WaveguideParams: n_cl must be positive");
  }
  if (n_h() < n_cl) throw DomainError("WaveguideParams: core index nbar/h must be >= n_cl");
}

int guided_count_sym(const WaveguideParams& params, double k) {
  const double l2 = params.scaled_d2(k);
  if (!(l2 > 0.0)) return 0;
  return static_cast<int>(std::ceil(std::sqrt(l2) / kPi));
}

int guided_count_anti(const WaveguideParams& params, double k) {
  const double l2 = params.scaled_d2(k);
  if (!(l2 > 0.0)) return 0;
  return std::max(0, static_cast<int>(std::ceil(std::sqrt(l2) / kPi - 0.5)));
}

double mode_sym(double x, double lambda, const WaveguideParams& params, double k) {
  const double h = params.h;
  const double ax = std::abs(x);
  const double root_lambda = std::sqrt(lambda);
  if (ax <= h) return std::cos(x * root_lambda);
  const double r = ax - h;
  const double y = h * root_lambda;
  const double gap = lambda - params.d2(k);
  if (gap >= 0.0) {
    const double big_q = std::sqrt(gap);
    return std::cos(y) * std::cos(big_q * r) - root_lambda * std::sin(y) * sin_over(big_q, r);
  }
  const double q = std::sqrt(-gap);
  return std::cos(y) * std::cosh(q * r) - root_lambda * std::sin(y) * sinh_over(q, r);
}

double mode_anti(double x, double lambda, const WaveguideParams& params, double k) {
  const double h = params.h;
  const double ax = std::abs(x);
  const double root_lambda = std::sqrt(lambda);
  if (ax <= h) return std::sin(x * root_lambda);
  const double r = ax - h;
  const double y = h * root_lambda;
  const double gap = lambda - params.d2(k);
  if (gap >= 0.0) {
    const double big_q = std::sqrt(gap);
    return sgn(x) *
           (std::sin(y) * std::cos(big_q * r) + root_lambda * std::cos(y) * sin_over(big_q, r));
  }
  const double q = std::sqrt(-gap);
  return sgn(x) *
         (std::sin(y) * std::cosh(q * r) + root_lambda * std::cos(y) * sinh_over(q, r));
}

GuidedSpectrum guided_roots(const WaveguideParams& params, double k) {
  params.validate();
  if (!(k > 0.0)) throw DomainError("guided_roots: k must be positive");
  GuidedSpectrum spectrum;
  spectrum.k = k;
  const double l2 = params.scaled_d2(k);
  if (!(l2 > 0.0)) return spectrum;
  const double big_l = std::sqrt(l2);
  const double h2 = params.h * params.h;
  // Brackets stop one ulp-scale step short of the poles of sec and csc.
  const double edge = 1e-12;

  const int js = guided_count_sym(params, k);
  for (int m = 0; m < js; ++m) {
    const double lo = m * kPi;
    const double hi = m * kPi + 0.5 * kPi - edge;
    const double y = bisect(lo, hi, big_l, sym_root_fn);
    spectrum.y_roots_sym.push_back(y);
    spectrum.roots_sym.push_back(y * y / h2);
  }
  const int ja = guided_count_anti(params, k);
  for (int m = 0; m < ja; ++m) {
    const double lo = m * kPi + 0.5 * kPi;
    const double hi = (m + 1) * kPi - edge;
    const double y = bisect(lo, hi, big_l, anti_root_fn);
    spectrum.y_roots_anti.push_back(y);
    spectrum.roots_anti.push_back(y * y / h2);
  }
  return spectrum;
}

double guided_weight(const WaveguideParams& params, double k, double lambda) {
  const double q = std::sqrt(params.d2(k) - lambda);
  return q / (1.0 + params.h * q);
}

double continuous_density(const WaveguideParams& params, double k, double lambda,
                          Parity parity) {
  const double d2 = params.d2(k);
  const double gap = lambda - d2;
  const double y = params.h * std::sqrt(lambda);
  const double trig = (parity == Parity::Sym) ? std::sin(y) : std::cos(y);
  return std::sqrt(gap) / (gap + d2 * trig * trig);
}

Complex green_guided(double x, double z, double x0, double z0, const WaveguideParams& params,
                     double k, const GuidedSpectrum& spectrum) {
  const double h = params.h;
  const double l2 = params.scaled_d2(k);
  const double knbar2 = k * k * params.nbar * params.nbar;
  const double dz = std::abs(z - z0);
  Complex sum{};
  const auto add = [&](const std::vector<double>& ys, Parity parity) {
    for (const double y : ys) {
      const double q = std::sqrt(std::max(0.0, l2 - y * y)) / h;
      const double kbeta = std::sqrt(knbar2 - y * y) / h;
      const double weight = q / (1.0 + h * q);
      const double product = guided_mode(x, y, q, h, parity) * guided_mode(x0, y, q, h, parity);
      if (product == 0.0) continue;
      const Complex propagator = std::exp(Complex(0.0, kbeta * dz)) / Complex(0.0, 2.0 * kbeta);
      sum += product * weight * propagator;
    }
  };
  add(spectrum.y_roots_sym, Parity::Sym);
  add(spectrum.y_roots_anti, Parity::Anti);
  return sum;
}

Complex green_continuous(double x, double z, double x0, double z0, const WaveguideParams& params,
                         double k, Parity parity, const QuadratureOptions& opts) {
  params.validate();
  const Point2 p{x, z};
  const auto values = continuous_many(std::span<const Point2>(&p, 1), Point2{x0, z0}, params, k,
                                      opts);
  return parity == Parity::Sym ? values[0] : values[1];
}

const GuidedSpectrum& SpectrumCache::get(const WaveguideParams& params, double k) {
  const Key key{std::bit_cast<std::uint64_t>(params.h), std::bit_cast<std::uint64_t>(params.nbar),
                std::bit_cast<std::uint64_t>(params.n_cl), std::bit_cast<std::uint64_t>(k)};
  {
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(key);
    if (it != entries_.end()) return *it->second;
  }
  auto spectrum = std::make_unique<GuidedSpectrum>(guided_roots(params, k));
  std::unique_lock lock(mutex_);
  const auto [it, inserted] = entries_.try_emplace(key, std::move(spectrum));
  return *it->second;
}

std::size_t SpectrumCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

GreenParts green_total(double x, double z, double x0, double z0, const WaveguideParams& params,
                       double k, const QuadratureOptions& opts, SpectrumCache* cache) {
  const Point2 p{x, z};
  return green_total_many(std::span<const Point2>(&p, 1), Point2{x0, z0}, params, k, opts,
                          cache)[0];
}

std::vector<GreenParts> green_total_many(std::span<const Point2> points, Point2 source,
                                         const WaveguideParams& params, double k,
                                         const QuadratureOptions& opts, SpectrumCache* cache) {
  params.validate();
  if (!(k > 0.0)) throw DomainError("green_total: k must be positive");
  std::vector<GreenParts> parts(points.size());
  if (points.empty()) return parts;

  GuidedSpectrum local;
  const GuidedSpectrum* spectrum = nullptr;
  if (cache != nullptr) {
    spectrum = &cache->get(params, k);
  } else {
    local = guided_roots(params, k);
    spectrum = &local;
  }
  const auto continuous = continuous_many(points, source, params, k, opts);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& out = parts[i];
    out.guided = green_guided(points[i].x, points[i].z, source.x, source.z, params, k, *spectrum);
    out.sym_cont = continuous[2 * i];
    out.anti_cont = continuous[2 * i + 1];
    out.total = out.guided + out.sym_cont + out.anti_cont;
  }
  return parts;
}

}  // namespace thinwg
