#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "thinwg/waveguide.hpp"

namespace thinwg {
namespace {

const WaveguideParams kThin{0.005, kPi / 2.0, 1.0};
const WaveguideParams kThick{0.2, 1.2, 1.0};

double root_bound(const WaveguideParams& p, double k) { return std::sqrt(p.scaled_d2(k)); }

// Root equations in y = h sqrt(lambda) multiplied through by cos y and sin y,
// so they have no poles: sqrt(L^2 - y^2) cos y - y sin y and sqrt(L^2 - y^2) sin y + y cos y.
double sym_equation(double y, double big_l) {
  return std::sqrt(std::max(0.0, big_l * big_l - y * y)) * std::cos(y) - y * std::sin(y);
}
double anti_equation(double y, double big_l) {
  return std::sqrt(std::max(0.0, big_l * big_l - y * y)) * std::sin(y) + y * std::cos(y);
}

TEST(Waveguide, ValidateRejectsBadParameters) {
  EXPECT_THROW((WaveguideParams{0.0, 1.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((WaveguideParams{0.1, -1.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((WaveguideParams{0.1, 1.0, 0.0}.validate()), DomainError);
  EXPECT_THROW((WaveguideParams{0.1, 0.05, 1.0}.validate()), DomainError);
  EXPECT_NO_THROW((WaveguideParams{0.1, 0.1, 1.0}.validate()));
}

TEST(Waveguide, ModeCountsAtReferenceFrequencies) {
  EXPECT_EQ(guided_count_sym(kThin, 1.0), 1);
  EXPECT_EQ(guided_count_anti(kThin, 1.0), 0);
  EXPECT_EQ(guided_count_sym(kThin, 2.5), 2);
  EXPECT_EQ(guided_count_anti(kThin, 2.5), 1);
}

TEST(Waveguide, CountsMatchSignScanOnRandomParameters) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> h_dist(0.002, 0.3);
  std::uniform_real_distribution<double> nbar_dist(0.1, 4.0);
  std::uniform_real_distribution<double> k_dist(0.1, 6.0);
  for (int trial = 0; trial < 100; ++trial) {
    const WaveguideParams p{h_dist(rng), nbar_dist(rng), 1.0};
    if (p.n_h() < p.n_cl) continue;
    const double k = k_dist(rng);
    const double big_l = root_bound(p, k);
    const int sym = oracle::sign_changes([&](double y) { return sym_equation(y, big_l); }, 0.0, big_l, 20000);
    const int anti = oracle::sign_changes([&](double y) { return anti_equation(y, big_l); }, 1e-9, big_l, 20000);
    EXPECT_EQ(guided_count_sym(p, k), sym) << "h=" << p.h << " nbar=" << p.nbar << " k=" << k;
    EXPECT_EQ(guided_count_anti(p, k), anti) << "h=" << p.h << " nbar=" << p.nbar << " k=" << k;
  }
}

TEST(Waveguide, RootsSolveTheirEquations) {
  for (const double k : {0.5, 1.0, 2.5, 4.0}) {
    const auto spec = guided_roots(kThick, k);
    const double big_l = root_bound(kThick, k);
    ASSERT_EQ(static_cast<int>(spec.roots_sym.size()), guided_count_sym(kThick, k));
    ASSERT_EQ(static_cast<int>(spec.roots_anti.size()), guided_count_anti(kThick, k));
    const double d2 = kThick.d2(k);
    for (std::size_t j = 0; j < spec.roots_sym.size(); ++j) {
      const double lambda = spec.roots_sym[j];
      EXPECT_GT(lambda, 0.0);
      EXPECT_LT(lambda, d2);
      EXPECT_NEAR(std::sqrt(d2 - lambda) - std::sqrt(lambda) * std::tan(kThick.h * std::sqrt(lambda)), 0.0,
                  1e-8 * d2);
      if (j > 0) EXPECT_GT(lambda, spec.roots_sym[j - 1]);
    }
    for (std::size_t j = 0; j < spec.roots_anti.size(); ++j) {
      const double lambda = spec.roots_anti[j];
      EXPECT_GT(lambda, 0.0);
      EXPECT_LT(lambda, d2);
      EXPECT_NEAR(std::sqrt(d2 - lambda) + std::sqrt(lambda) / std::tan(kThick.h * std::sqrt(lambda)), 0.0,
                  1e-8 * d2);
      if (j > 0) EXPECT_GT(lambda, spec.roots_anti[j - 1]);
    }
  }
}

TEST(Waveguide, LargestSymmetricRootAgainstBisection) {
  const double k = 2.5;
  const double big_l = root_bound(kThin, k);
  double lo = kPi;
  double hi = big_l;
  ASSERT_LT(sym_equation(lo, big_l) * sym_equation(hi, big_l), 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((sym_equation(lo, big_l) < 0.0) == (sym_equation(mid, big_l) < 0.0) ? lo : hi) = mid;
  }
  const auto spec = guided_roots(kThin, k);
  ASSERT_EQ(spec.y_roots_sym.size(), 2u);
  EXPECT_NEAR(spec.y_roots_sym[1], 0.5 * (lo + hi), 1e-10);
  EXPECT_GT(spec.y_roots_sym[1], kPi);
  EXPECT_LT(spec.y_roots_sym[1], 1.5 * kPi);
}

TEST(Waveguide, NoAntisymmetricModeBelowHalfPi) {
  const WaveguideParams p{0.01, 1.0, 1.0};
  EXPECT_LT(root_bound(p, 1.5), kPi / 2.0);
  EXPECT_EQ(guided_count_anti(p, 1.5), 0);
  EXPECT_TRUE(guided_roots(p, 1.5).roots_anti.empty());
}

TEST(Waveguide, ModesContinuousAtInterface) {
  const double k = 2.0;
  const double h = kThick.h;
  const double d2 = kThick.d2(k);
  for (const double lambda : {0.3 * d2, 1.7 * d2, d2}) {
    for (const double side : {1.0, -1.0}) {
      const double in = side * std::nextafter(h, 0.0);
      const double out = side * std::nextafter(h, 1.0);
      EXPECT_NEAR(mode_sym(in, lambda, kThick, k), mode_sym(out, lambda, kThick, k), 1e-9);
      EXPECT_NEAR(mode_anti(in, lambda, kThick, k), mode_anti(out, lambda, kThick, k), 1e-9);
      const double step = 1e-6;
      const auto slope = [&](auto mode, double x) {
        return (mode(x + step, lambda, kThick, k) - mode(x - step, lambda, kThick, k)) / (2.0 * step);
      };
      const double eps = 1e-4;
      EXPECT_NEAR(slope(mode_sym, side * (h - eps)), slope(mode_sym, side * (h + eps)), 1e-2 * std::max(1.0, lambda));
      EXPECT_NEAR(slope(mode_anti, side * (h - eps)), slope(mode_anti, side * (h + eps)), 1e-2 * std::max(1.0, lambda));
    }
  }
}

TEST(Waveguide, ModesContinuousAcrossCutoff) {
  const double k = 2.0;
  const double d2 = kThick.d2(k);
  for (const double x : {0.3, 0.9, 2.5}) {
    EXPECT_NEAR(mode_sym(x, d2 * (1.0 - 1e-12), kThick, k), mode_sym(x, d2 * (1.0 + 1e-12), kThick, k), 1e-8);
    EXPECT_NEAR(mode_anti(x, d2 * (1.0 - 1e-12), kThick, k), mode_anti(x, d2 * (1.0 + 1e-12), kThick, k), 1e-8);
  }
}

TEST(Waveguide, ModeParity) {
  const double k = 1.5;
  for (const double lambda : {2.0, 30.0, 300.0}) {
    for (const double x : {0.05, 0.2, 0.7, 3.0}) {
      EXPECT_EQ(mode_sym(-x, lambda, kThick, k), mode_sym(x, lambda, kThick, k));
      EXPECT_EQ(mode_anti(-x, lambda, kThick, k), -mode_anti(x, lambda, kThick, k));
    }
    EXPECT_EQ(mode_anti(0.0, lambda, kThick, k), 0.0);
    EXPECT_EQ(mode_sym(0.0, lambda, kThick, k), 1.0);
  }
}

TEST(Waveguide, ModesSolveCladdingEquation) {
  const double k = 1.5;
  const double d2 = kThick.d2(k);
  const double step = 1e-4;
  for (const double lambda : {0.5 * d2, 2.0 * d2}) {
    for (const double x : {0.5, 1.3}) {
      const auto residual = [&](auto mode) {
        const double second = (mode(x + step, lambda, kThick, k) - 2.0 * mode(x, lambda, kThick, k) +
                               mode(x - step, lambda, kThick, k)) / (step * step);
        return second + (lambda - d2) * mode(x, lambda, kThick, k);
      };
      EXPECT_NEAR(residual(mode_sym), 0.0, 1e-4 * std::max(1.0, d2));
      EXPECT_NEAR(residual(mode_anti), 0.0, 1e-4 * std::max(1.0, d2));
    }
  }
}

TEST(Waveguide, GuidedModesDecayOutsideCore) {
  const double k = 3.0;
  const auto spec = guided_roots(kThick, k);
  const double d2 = kThick.d2(k);
  const double h = kThick.h;
  for (const double lambda : spec.roots_sym) {
    const double q = std::sqrt(d2 - lambda);
    for (const double x : {0.3, 1.0}) {
      EXPECT_NEAR(mode_sym(x, lambda, kThick, k), std::cos(h * std::sqrt(lambda)) * std::exp(-q * (x - h)), 1e-6);
    }
  }
  for (const double lambda : spec.roots_anti) {
    const double q = std::sqrt(d2 - lambda);
    for (const double x : {0.3, 1.0}) {
      EXPECT_NEAR(mode_anti(-x, lambda, kThick, k), -std::sin(h * std::sqrt(lambda)) * std::exp(-q * (x - h)), 1e-6);
    }
  }
}

TEST(Waveguide, GuidedSumMatchesDirectFormula) {
  const double k = 3.0;
  const double x = 0.5;
  const double x0 = -0.35;
  const double dz = 1.1;
  const auto spec = guided_roots(kThick, k);
  const double d2 = kThick.d2(k);
  const double h = kThick.h;
  const double kn2 = k * k * kThick.n_h() * kThick.n_h();
  Complex expected{};
  const auto term = [&](double lambda, double vx, double vx0) {
    const double q = std::sqrt(d2 - lambda);
    const double kbeta = std::sqrt(kn2 - lambda);
    return vx * vx0 * std::exp(Complex(0.0, kbeta * dz)) / Complex(0.0, 2.0 * kbeta) * q / (1.0 + h * q);
  };
  for (const double lambda : spec.roots_sym) {
    const double y = h * std::sqrt(lambda);
    const double q = std::sqrt(d2 - lambda);
    expected += term(lambda, std::cos(y) * std::exp(-q * (std::abs(x) - h)), std::cos(y) * std::exp(-q * (std::abs(x0) - h)));
  }
  for (const double lambda : spec.roots_anti) {
    const double y = h * std::sqrt(lambda);
    const double q = std::sqrt(d2 - lambda);
    expected += term(lambda, std::sin(y) * std::exp(-q * (std::abs(x) - h)), -std::sin(y) * std::exp(-q * (std::abs(x0) - h)));
  }
  const Complex got = green_guided(x, dz, x0, 0.0, kThick, k, spec);
  EXPECT_NEAR(std::abs(got - expected), 0.0, 1e-12 * std::abs(expected));
}

TEST(Waveguide, EmptySpectrumGivesZeroGuidedPart) {
  EXPECT_EQ(green_guided(0.4, 1.0, 0.3, 0.0, kThick, 1.0, GuidedSpectrum{}), Complex{});
}

TEST(Waveguide, GuidedPartNegligibleForThinCoreFarSource) {
  const auto spec = guided_roots(kThin, 1.0);
  EXPECT_LT(std::abs(green_guided(1.0, 3.0, 1.0, 0.0, kThin, 1.0, spec)), 1e-40);
}

TEST(Waveguide, WeightAndDensityPositive) {
  for (const double k : {0.5, 2.0, 4.0}) {
    const auto spec = guided_roots(kThick, k);
    for (const double lambda : spec.roots_sym) EXPECT_GT(guided_weight(kThick, k, lambda), 0.0);
    for (const double lambda : spec.roots_anti) EXPECT_GT(guided_weight(kThick, k, lambda), 0.0);
    const double d2 = kThick.d2(k);
    for (double lambda = d2 * 1.001; lambda < d2 + 500.0; lambda += 7.3) {
      EXPECT_GT(continuous_density(kThick, k, lambda, Parity::Sym), 0.0);
      EXPECT_GT(continuous_density(kThick, k, lambda, Parity::Anti), 0.0);
    }
  }
}

TEST(Waveguide, UniformCoreReducesToFreeSpace) {
  const WaveguideParams uniform{0.2, 0.2, 1.0};
  const double k = 1.7;
  for (const auto [x, z, x0] : {std::tuple{0.6, 1.0, 0.4}, std::tuple{-1.2, 2.5, 0.8}, std::tuple{0.1, 0.7, -0.05}}) {
    const Complex g = green_total(x, z, x0, 0.0, uniform, k).total;
    const Complex ref = oracle::hankel_green_std(k, 1.0, std::hypot(x - x0, z));
    EXPECT_NEAR(std::abs(g - ref), 0.0, 1e-6) << x << " " << z << " " << x0;
  }
}

TEST(Waveguide, Reciprocity) {
  const double k = 2.2;
  const Complex a = green_total(0.5, 1.2, 0.9, -0.3, kThick, k).total;
  const Complex b = green_total(0.9, -0.3, 0.5, 1.2, kThick, k).total;
  EXPECT_NEAR(std::abs(a - b), 0.0, 1e-6 * std::abs(a));
}

TEST(Waveguide, ReflectionAndTranslation) {
  const double k = 1.3;
  const Complex a = green_total(0.5, 1.2, -0.9, 0.0, kThick, k).total;
  const Complex mirrored = green_total(-0.5, 1.2, 0.9, 0.0, kThick, k).total;
  const Complex flipped = green_total(0.5, -1.2, -0.9, 0.0, kThick, k).total;
  const Complex shifted = green_total(0.5, 4.2, -0.9, 3.0, kThick, k).total;
  EXPECT_NEAR(std::abs(a - mirrored), 0.0, 1e-9 * std::abs(a));
  EXPECT_NEAR(std::abs(a - flipped), 0.0, 1e-9 * std::abs(a));
  EXPECT_NEAR(std::abs(a - shifted), 0.0, 1e-9 * std::abs(a));
}

TEST(Waveguide, ContinuousAcrossCoreBoundary) {
  const double k = 2.0;
  const double h = kThick.h;
  const Complex in = green_total(h - 1e-7, 1.0, 0.7, 0.0, kThick, k).total;
  const Complex out = green_total(h + 1e-7, 1.0, 0.7, 0.0, kThick, k).total;
  EXPECT_NEAR(std::abs(in - out), 0.0, 1e-5 * std::abs(in));
}

TEST(Waveguide, BatchMatchesSinglePoints) {
  const double k = 1.1;
  const std::vector<Point2> pts{{0.4, 1.0}, {-0.8, 2.0}, {1.5, 0.5}};
  const Point2 src{0.6, 0.0};
  SpectrumCache cache;
  const auto many = green_total_many(pts, src, kThick, k, {}, &cache);
  ASSERT_EQ(many.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto single = green_total(pts[i].x, pts[i].z, src.x, src.z, kThick, k, {}, &cache);
    EXPECT_NEAR(std::abs(many[i].total - single.total), 0.0, 1e-7 * std::abs(single.total));
    EXPECT_EQ(many[i].total, many[i].guided + many[i].sym_cont + many[i].anti_cont);
  }
  EXPECT_EQ(cache.size(), 1u);
  EXPECT_EQ(&cache.get(kThick, k), &cache.get(kThick, k));
}

TEST(Waveguide, CoincidentPointRejected) {
  EXPECT_THROW(green_total(0.3, 0.0, 0.3, 0.0, kThick, 1.0), DomainError);
}

}  // namespace
}  // namespace thinwg
