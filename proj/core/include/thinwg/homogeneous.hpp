#pragma once

#include <span>
#include <vector>

#include "thinwg/common.hpp"
#include "thinwg/quadrature.hpp"
#include "thinwg/waveguide.hpp"

namespace thinwg {

/// Free-space Green function H of  Delta u + k^2 n_cl^2 u = delta, closed form.
/// Throws DomainError when the points coincide.
Complex H_free(double x, double z, double x0, double z0, double k, double n_cl);

/// H from its tau-integral representation; a diagnostic twin of H_free.
/// Requires z != z0.
Complex H_free_spectral(double x, double z, double x0, double z0, double k, double n_cl,
                        const QuadratureOptions& opts = {});

/// Even and odd parts of H under x -> -x. 2 H_a is the Dirichlet half-plane
/// Green function, 2 H_s the Neumann one.
struct HalfPlaneParts {
  Complex H_s;
  Complex H_a;
};

/// Throws DomainError if (x, z) or (-x, z) coincides with the source.
HalfPlaneParts H_images(double x, double z, double x0, double z0, double k, double n_cl);

/// Threshold on |sin(k nbar)| and |cos(k nbar)| below which a frequency counts as resonant.
inline constexpr double kResonanceEpsilon = 1e-9;

enum class RegimeKind { NonResonant, SymResonant, AntiResonant };
enum class Side { SameSide, OppositeSide };

struct Regime {
  RegimeKind kind = RegimeKind::NonResonant;
  Side side = Side::SameSide;
};

/// sin(k nbar) = 0 is the symmetric resonance, cos(k nbar) = 0 the antisymmetric one.
RegimeKind classify_frequency(double k, double nbar, double eps = kResonanceEpsilon);
Regime classify(double k, double nbar, double x, double x0, double eps = kResonanceEpsilon);

/// Raw tau-integrals behind the first-order corrections, each multiplied by k / (2 pi):
///   base      = int tau sin(k tau s) E dtau
///   psi_sym   = int (tau^2 + n_cl^2) / (2 tau) sin(k tau s) E dtau
///   psi_anti  = int (3 tau^2 - n_cl^2) / (2 tau) sin(k tau s) E dtau
/// with s = |x| + |x0| and E = exp(i k sqrt(n_cl^2 - tau^2) |z - z0|) / (i sqrt(n_cl^2 - tau^2)).
struct CorrectionIntegrals {
  Complex base;
  Complex psi_sym;
  Complex psi_anti;
};

/// All three integrals at many field points for one source, on a shared tau mesh.
/// Requires z != z0 for every point.
std::vector<CorrectionIntegrals> correction_integrals(std::span<const Point2> points,
                                                      Point2 source, double k, double n_cl,
                                                      const QuadratureOptions& opts = {});

/// First-order correction fields assembled from the raw integrals. The Phi fields
/// throw DomainError when their trigonometric factor is within eps of zero.
Complex phi_s_from(const CorrectionIntegrals& raw, double k, double nbar,
                   double eps = kResonanceEpsilon);
Complex phi_a_from(const CorrectionIntegrals& raw, double x, double x0, double k, double nbar,
                   double eps = kResonanceEpsilon);
Complex psi_s_from(const CorrectionIntegrals& raw, double z, double z0, double k, double n_cl);
Complex psi_a_from(const CorrectionIntegrals& raw, double x, double z, double x0, double z0,
                   double k, double n_cl);

Complex phi_s(double x, double z, double x0, double z0, double k, double n_cl, double nbar,
              const QuadratureOptions& opts = {}, double eps = kResonanceEpsilon);
Complex phi_a(double x, double z, double x0, double z0, double k, double n_cl, double nbar,
              const QuadratureOptions& opts = {}, double eps = kResonanceEpsilon);
Complex psi_s(double x, double z, double x0, double z0, double k, double n_cl, double nbar,
              const QuadratureOptions& opts = {});
Complex psi_a(double x, double z, double x0, double z0, double k, double n_cl, double nbar,
              const QuadratureOptions& opts = {});

/// Phi_s + Phi_a at many points: the first-order term of the non-resonant regime.
std::vector<Complex> phi_sum_many(std::span<const Point2> points, Point2 source, double k,
                                  double n_cl, double nbar, const QuadratureOptions& opts = {},
                                  double eps = kResonanceEpsilon);

/// Regime-dependent approximation of G to order 0 or 1 in h. Field points must
/// satisfy x != 0 and source x0 != 0.
Complex asymptotic_G(double x, double z, double x0, double z0, double k,
                     const WaveguideParams& params, int order, const QuadratureOptions& opts = {},
                     double eps = kResonanceEpsilon);

std::vector<Complex> asymptotic_G_many(std::span<const Point2> points, Point2 source, double k,
                                       const WaveguideParams& params, int order,
                                       const QuadratureOptions& opts = {},
                                       double eps = kResonanceEpsilon);

}  // namespace thinwg
