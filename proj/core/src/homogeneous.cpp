#include "thinwg/homogeneous.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "thinwg/specfun.hpp"

namespace thinwg {
namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

double distance(double x, double z, double x0, double z0) { return std::hypot(x - x0, z - z0); }

// k n_cl exp(i k n_cl |z - z0|) / (8 i): the guided-like term of the Psi fields.
Complex psi_offset(double z, double z0, double k, double n_cl) {
  const Complex phase = std::exp(Complex(0.0, k * n_cl * std::abs(z - z0)));
  return k * n_cl * phase / Complex(0.0, 8.0);
}

enum class ZeroOrder { TwoHa, Zero, H, MinusH };
enum class SymTerm { PhiS, PsiS };
enum class AntiTerm { PhiA, PsiA };

struct RegimeEntry {
  RegimeKind kind;
  Side side;
  ZeroOrder zero;
  SymTerm sym;
  AntiTerm anti;
};

// One row per regime and side: G ~ zero + h (sym + anti).
constexpr std::array<RegimeEntry, 6> kRegimeTable{{
    {RegimeKind::NonResonant, Side::SameSide, ZeroOrder::TwoHa, SymTerm::PhiS, AntiTerm::PhiA},
    {RegimeKind::NonResonant, Side::OppositeSide, ZeroOrder::Zero, SymTerm::PhiS, AntiTerm::PhiA},
    {RegimeKind::SymResonant, Side::SameSide, ZeroOrder::H, SymTerm::PsiS, AntiTerm::PhiA},
    {RegimeKind::SymResonant, Side::OppositeSide, ZeroOrder::H, SymTerm::PsiS, AntiTerm::PhiA},
    {RegimeKind::AntiResonant, Side::SameSide, ZeroOrder::H, SymTerm::PhiS, AntiTerm::PsiA},
    {RegimeKind::AntiResonant, Side::OppositeSide, ZeroOrder::MinusH, SymTerm::PhiS,
     AntiTerm::PsiA},
}};

const RegimeEntry& lookup(const Regime& regime) {
  for (const auto& entry : kRegimeTable) {
    if (entry.kind == regime.kind && entry.side == regime.side) return entry;
  }
  throw std::logic_error("asymptotic_G: regime missing from dispatch table");
}

}  // namespace

Complex H_free(double x, double z, double x0, double z0, double k, double n_cl) {
  const double r = distance(x, z, x0, z0);
  if (r == 0.0) throw DomainError("H_free: field point coincides with the source");
  return hankel_green(k, n_cl, r);
}

Complex H_free_spectral(double x, double z, double x0, double z0, double k, double n_cl,
                        const QuadratureOptions& opts) {
  const double dx = x - x0;
  const double dz = std::abs(z - z0);
  const ScalarSpectralIntegrand f = [&](double tau, Complex root) {
    return std::cos(k * tau * dx) * propagation_kernel(k, root, dz) / (2.0 * kPi);
  };
  return integrate_spectral(f, SpectralIntegrandContext::from(k, n_cl, dz, opts));
}

HalfPlaneParts H_images(double x, double z, double x0, double z0, double k, double n_cl) {
  if (distance(-x, z, x0, z0) == 0.0) {
    throw DomainError("H_images: mirrored field point coincides with the source");
  }
  const Complex direct = H_free(x, z, x0, z0, k, n_cl);
  const Complex mirror = H_free(-x, z, x0, z0, k, n_cl);
  HalfPlaneParts parts;
  parts.H_s = 0.5 * (direct + mirror);
  parts.H_a = direct - parts.H_s;
  return parts;
}

RegimeKind classify_frequency(double k, double nbar, double eps) {
  const double arg = k * nbar;
  if (std::abs(std::sin(arg)) <= eps) return RegimeKind::SymResonant;
  if (std::abs(std::cos(arg)) <= eps) return RegimeKind::AntiResonant;
  return RegimeKind::NonResonant;
}

Regime classify(double k, double nbar, double x, double x0, double eps) {
  Regime regime;
  regime.kind = classify_frequency(k, nbar, eps);
  regime.side = (x * x0 > 0.0) ? Side::SameSide : Side::OppositeSide;
  return regime;
}

std::vector<CorrectionIntegrals> correction_integrals(std::span<const Point2> points,
                                                      Point2 source, double k, double n_cl,
                                                      const QuadratureOptions& opts) {
  std::vector<CorrectionIntegrals> result(points.size());
  if (points.empty()) return result;
  std::vector<double> sigma(points.size());
  std::vector<double> dz(points.size());
  double z_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    sigma[i] = std::abs(points[i].x) + std::abs(source.x);
    dz[i] = std::abs(points[i].z - source.z);
    z_dist = std::min(z_dist, dz[i]);
  }
  const double n2 = n_cl * n_cl;
  const double scale = k / (2.0 * kPi);
  const SpectralIntegrand f = [&](double tau, Complex root, std::span<Complex> out) {
    const double w_base = tau;
    const double w_sym = (tau * tau + n2) / (2.0 * tau);
    const double w_anti = (3.0 * tau * tau - n2) / (2.0 * tau);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      const Complex common = scale * std::sin(k * tau * sigma[i]) * propagation_kernel(k, root, dz[i]);
      out[3 * i] = w_base * common;
      out[3 * i + 1] = w_sym * common;
      out[3 * i + 2] = w_anti * common;
    }
  };
  const auto values =
      integrate_spectral(3 * points.size(), f, SpectralIntegrandContext::from(k, n_cl, z_dist, opts))
          .values;
  for (std::size_t i = 0; i < points.size(); ++i) {
    result[i] = {values[3 * i], values[3 * i + 1], values[3 * i + 2]};
  }
  return result;
}

Complex phi_s_from(const CorrectionIntegrals& raw, double k, double nbar, double eps) {
  const double arg = k * nbar;
  const double s = std::sin(arg);
  if (std::abs(s) <= eps) throw DomainError("phi_s: sin(k nbar) vanishes (symmetric resonance)");
  return -(std::cos(arg) / s / arg + 1.0) * raw.base;
}

Complex phi_a_from(const CorrectionIntegrals& raw, double x, double x0, double k, double nbar,
                   double eps) {
  const double arg = k * nbar;
  const double c = std::cos(arg);
  if (std::abs(c) <= eps) {
    throw DomainError("phi_a: cos(k nbar) vanishes (antisymmetric resonance)");
  }
  return sgn(x * x0) * (std::sin(arg) / c / arg - 1.0) * raw.base;
}

Complex psi_s_from(const CorrectionIntegrals& raw, double z, double z0, double k, double n_cl) {
  return raw.psi_sym - psi_offset(z, z0, k, n_cl);
}

Complex psi_a_from(const CorrectionIntegrals& raw, double x, double z, double x0, double z0,
                   double k, double n_cl) {
  return sgn(x * x0) * (raw.psi_anti - psi_offset(z, z0, k, n_cl));
}

namespace {

CorrectionIntegrals single(double x, double z, double x0, double z0, double k, double n_cl,
                           const QuadratureOptions& opts) {
  const Point2 p{x, z};
  return correction_integrals(std::span<const Point2>(&p, 1), Point2{x0, z0}, k, n_cl, opts)[0];
}

void require_off_axis(double x, double x0) {
  if (x == 0.0 || x0 == 0.0) {
    throw DomainError("correction fields: x and x0 must be nonzero");
  }
}

}  // namespace

Complex phi_s(double x, double z, double x0, double z0, double k, double n_cl, double nbar,
              const QuadratureOptions& opts, double eps) {
  require_off_axis(x, x0);
  if (std::abs(std::sin(k * nbar)) <= eps) {
    throw DomainError("phi_s: sin(k nbar) vanishes (symmetric resonance)");
  }
  return phi_s_from(single(x, z, x0, z0, k, n_cl, opts), k, nbar, eps);
}

Complex phi_a(double x, double z, double x0, double z0, double k, double n_cl, double nbar,
              const QuadratureOptions& opts, double eps) {
  require_off_axis(x, x0);
  if (std::abs(std::cos(k * nbar)) <= eps) {
    throw DomainError("phi_a: cos(k nbar) vanishes (antisymmetric resonance)");
  }
  return phi_a_from(single(x, z, x0, z0, k, n_cl, opts), x, x0, k, nbar, eps);
}

Complex psi_s(double x, double z, double x0, double z0, double k, double n_cl, double /*nbar*/,
              const QuadratureOptions& opts) {
  require_off_axis(x, x0);
  return psi_s_from(single(x, z, x0, z0, k, n_cl, opts), z, z0, k, n_cl);
}

Complex psi_a(double x, double z, double x0, double z0, double k, double n_cl, double /*nbar*/,
              const QuadratureOptions& opts) {
  require_off_axis(x, x0);
  return psi_a_from(single(x, z, x0, z0, k, n_cl, opts), x, z, x0, z0, k, n_cl);
}

std::vector<Complex> phi_sum_many(std::span<const Point2> points, Point2 source, double k,
                                  double n_cl, double nbar, const QuadratureOptions& opts,
                                  double eps) {
  const double arg = k * nbar;
  if (std::abs(std::sin(arg)) <= eps || std::abs(std::cos(arg)) <= eps) {
    throw DomainError("phi_sum_many: frequency is resonant");
  }
  for (const auto& p : points) require_off_axis(p.x, source.x);
  const auto raw = correction_integrals(points, source, k, n_cl, opts);
  std::vector<Complex> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = phi_s_from(raw[i], k, nbar, eps) + phi_a_from(raw[i], points[i].x, source.x, k, nbar, eps);
  }
  return out;
}

std::vector<Complex> asymptotic_G_many(std::span<const Point2> points, Point2 source, double k,
                                       const WaveguideParams& params, int order,
                                       const QuadratureOptions& opts, double eps) {
  if (order != 0 && order != 1) throw DomainError("asymptotic_G: order must be 0 or 1");
  const double n_cl = params.n_cl;
  const double nbar = params.nbar;
  for (const auto& p : points) require_off_axis(p.x, source.x);

  std::vector<CorrectionIntegrals> raw;
  if (order == 1) raw = correction_integrals(points, source, k, n_cl, opts);

  std::vector<Complex> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i].x;
    const double z = points[i].z;
    const RegimeEntry& entry = lookup(classify(k, nbar, x, source.x, eps));
    Complex value;
    switch (entry.zero) {
      case ZeroOrder::TwoHa:
        value = 2.0 * H_images(x, z, source.x, source.z, k, n_cl).H_a;
        break;
      case ZeroOrder::Zero:
        value = 0.0;
        break;
      case ZeroOrder::H:
        value = H_free(x, z, source.x, source.z, k, n_cl);
        break;
      case ZeroOrder::MinusH:
        value = -H_free(x, z, source.x, source.z, k, n_cl);
        break;
    }
    if (order == 1) {
      // The dispatch table never pairs a Phi field with its own resonance, so
      // the trigonometric guards below cannot fire.
      const Complex sym = (entry.sym == SymTerm::PhiS)
                              ? phi_s_from(raw[i], k, nbar, eps)
                              : psi_s_from(raw[i], z, source.z, k, n_cl);
      const Complex anti = (entry.anti == AntiTerm::PhiA)
                               ? phi_a_from(raw[i], x, source.x, k, nbar, eps)
                               : psi_a_from(raw[i], x, z, source.x, source.z, k, n_cl);
      value += params.h * (sym + anti);
    }
    out[i] = value;
  }
  return out;
}

Complex asymptotic_G(double x, double z, double x0, double z0, double k,
                     const WaveguideParams& params, int order, const QuadratureOptions& opts,
                     double eps) {
  const Point2 p{x, z};
  return asymptotic_G_many(std::span<const Point2>(&p, 1), Point2{x0, z0}, k, params, order, opts,
                           eps)[0];
}

}  // namespace thinwg
