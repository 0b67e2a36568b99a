#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <tuple>
#include <vector>

#include "thinwg/common.hpp"
#include "thinwg/quadrature.hpp"

namespace thinwg {

/// Slab waveguide: core |x| < h with index nbar / h inside a cladding of index n_cl.
struct WaveguideParams {
  double h = 0.005;
  double nbar = kPi / 2.0;
  double n_cl = 1.0;

  double n_h() const { return nbar / h; }
  double d2(double k) const { return k * k * (n_h() * n_h() - n_cl * n_cl); }
  /// h^2 d^2 = k^2 nbar^2 - h^2 k^2 n_cl^2, the squared root-equation bound L^2.
  double scaled_d2(double k) const { return k * k * (nbar * nbar - h * h * n_cl * n_cl); }

  /// Throws DomainError unless h, nbar, n_cl > 0 and n_h >= n_cl. Equality is
  /// accepted so the homogeneous limit can be evaluated through the same code.
  void validate() const;
};

enum class Parity { Sym, Anti };

struct GuidedSpectrum {
  double k = 0.0;
  std::vector<double> roots_sym;   // lambda, increasing
  std::vector<double> roots_anti;  // lambda, increasing
  std::vector<double> y_roots_sym;  // h sqrt(lambda)
  std::vector<double> y_roots_anti;
};

struct GreenParts {
  Complex guided;
  Complex sym_cont;
  Complex anti_cont;
  Complex total;
};

/// Number of symmetric / antisymmetric guided modes: ceil(L/pi) and ceil(L/pi - 1/2).
int guided_count_sym(const WaveguideParams& params, double k);
int guided_count_anti(const WaveguideParams& params, double k);

/// Symmetric mode v_s(x, lambda). lambda >= d^2 uses the oscillatory branch with
/// Q = sqrt(lambda - d^2) (Q = 0 by its limit); lambda < d^2 the decaying one.
double mode_sym(double x, double lambda, const WaveguideParams& params, double k);

/// Antisymmetric mode v_a(x, lambda); odd in x.
double mode_anti(double x, double lambda, const WaveguideParams& params, double k);

/// Guided eigenvalues by bisection in y = h sqrt(lambda). Throws std::logic_error
/// if a bracket predicted by the count formula has no sign change.
GuidedSpectrum guided_roots(const WaveguideParams& params, double k);

/// Discrete guided-mode sum G_{s,g} + G_{a,g}.
Complex green_guided(double x, double z, double x0, double z0, const WaveguideParams& params,
                     double k, const GuidedSpectrum& spectrum);

/// Continuous part of one parity, G_{s,c} or G_{a,c}.
Complex green_continuous(double x, double z, double x0, double z0, const WaveguideParams& params,
                         double k, Parity parity, const QuadratureOptions& opts = {});

/// Thread-safe cache of guided spectra keyed by the bit patterns of (h, nbar, n_cl, k).
class SpectrumCache {
 public:
  const GuidedSpectrum& get(const WaveguideParams& params, double k);
  std::size_t size() const;

 private:
  using Key = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::unique_ptr<GuidedSpectrum>> entries_;
};

/// Full Green function at one field point.
GreenParts green_total(double x, double z, double x0, double z0, const WaveguideParams& params,
                       double k, const QuadratureOptions& opts = {},
                       SpectrumCache* cache = nullptr);

/// Green function at many field points for one source. All points share one
/// adaptive tau mesh, so results vary smoothly with the point coordinates.
std::vector<GreenParts> green_total_many(std::span<const Point2> points, Point2 source,
                                         const WaveguideParams& params, double k,
                                         const QuadratureOptions& opts = {},
                                         SpectrumCache* cache = nullptr);

/// Guided spectral weight sqrt(d^2 - lambda) / (1 + h sqrt(d^2 - lambda)).
double guided_weight(const WaveguideParams& params, double k, double lambda);

/// Continuous spectral density sqrt(lambda - d^2) / ((lambda - d^2) + d^2 sin^2(h sqrt(lambda)))
/// (cos^2 for the antisymmetric parity), lambda > d^2.
double continuous_density(const WaveguideParams& params, double k, double lambda, Parity parity);

}  // namespace thinwg
