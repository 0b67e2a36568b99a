#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "thinwg/homogeneous.hpp"

namespace thinwg {
namespace {

// (k / 2 pi) int tau sin(k tau s) E dtau = -d/ds of the free field at R = sqrt(s^2 + z^2),
// which is -(i/4) k n H1(k n R) s / R.
Complex base_closed_form(double s, double z, double k, double n) {
  const double r = std::hypot(s, z);
  const Complex h1(std::cyl_bessel_j(1.0, k * n * r), std::cyl_neumann(1.0, k * n * r));
  return Complex(0.0, -0.25) * k * n * h1 * s / r;
}

TEST(Homogeneous, ClosedFormMatchesStandardLibrary) {
  for (const auto [x, z, x0, z0] : {std::tuple{0.3, 1.0, 1.0, 0.0}, std::tuple{-2.0, 0.0, 1.0, 0.0},
                                     std::tuple{0.5, -3.0, 0.2, 4.0}}) {
    const double r = std::hypot(x - x0, z - z0);
    EXPECT_NEAR(std::abs(H_free(x, z, x0, z0, 1.3, 1.1) - oracle::hankel_green_std(1.3, 1.1, r)), 0.0, 1e-12);
  }
  EXPECT_THROW(H_free(1.0, 2.0, 1.0, 2.0, 1.0, 1.0), DomainError);
}

TEST(Homogeneous, SpectralTwinMatchesClosedForm) {
  QuadratureOptions opts;
  opts.tolerance = 1e-10;
  for (const auto [x, z, x0] : {std::tuple{0.3, 1.0, 1.0}, std::tuple{-2.0, 0.4, 1.0}, std::tuple{5.0, 2.0, 0.0}}) {
    const Complex a = H_free_spectral(x, z, x0, 0.0, 2.0, 1.0, opts);
    const Complex b = H_free(x, z, x0, 0.0, 2.0, 1.0);
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-7) << x << " " << z << " " << x0;
  }
}

TEST(Homogeneous, ImagePartsRecombine) {
  const double k = 1.7;
  const auto parts = H_images(0.4, 1.3, 0.9, 0.0, k, 1.0);
  const Complex direct = H_free(0.4, 1.3, 0.9, 0.0, k, 1.0);
  const Complex image = H_free(-0.4, 1.3, 0.9, 0.0, k, 1.0);
  EXPECT_NEAR(std::abs(parts.H_s + parts.H_a - direct), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(parts.H_s - parts.H_a - image), 0.0, 1e-15);
}

TEST(Homogeneous, DirichletPartVanishesOnAxis) {
  for (const double z : {0.5, 2.0, -7.0}) {
    EXPECT_EQ(H_images(0.0, z, 0.8, 0.0, 1.0, 1.0).H_a, Complex{});
  }
}

TEST(Homogeneous, ImagePartsHaveParity) {
  const auto a = H_images(0.4, 1.3, 0.9, 0.0, 1.0, 1.0);
  const auto b = H_images(-0.4, 1.3, 0.9, 0.0, 1.0, 1.0);
  EXPECT_NEAR(std::abs(a.H_s - b.H_s), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a.H_a + b.H_a), 0.0, 1e-15);
}

TEST(Homogeneous, FieldDecaysLikeInverseSquareRoot) {
  const double k = 1.0;
  const double near = std::abs(H_free(100.0, 0.0, 0.0, 0.0, k, 1.0));
  const double far = std::abs(H_free(400.0, 0.0, 0.0, 0.0, k, 1.0));
  EXPECT_NEAR(near / far, 2.0, 1e-3);
}

TEST(Homogeneous, FrequencyClassification) {
  const double nbar = kPi / 2.0;
  EXPECT_EQ(classify_frequency(2.0, nbar), RegimeKind::SymResonant);
  EXPECT_EQ(classify_frequency(4.0, nbar), RegimeKind::SymResonant);
  EXPECT_EQ(classify_frequency(1.0, nbar), RegimeKind::AntiResonant);
  EXPECT_EQ(classify_frequency(3.0, nbar), RegimeKind::AntiResonant);
  EXPECT_EQ(classify_frequency(2.5, nbar), RegimeKind::NonResonant);
  EXPECT_EQ(classify_frequency(1.01, nbar), RegimeKind::NonResonant);
  EXPECT_EQ(classify_frequency(1.01, nbar, 0.05), RegimeKind::AntiResonant);
}

TEST(Homogeneous, SideClassification) {
  EXPECT_EQ(classify(2.5, 1.0, 0.3, 1.0).side, Side::SameSide);
  EXPECT_EQ(classify(2.5, 1.0, -0.3, -1.0).side, Side::SameSide);
  EXPECT_EQ(classify(2.5, 1.0, -0.3, 1.0).side, Side::OppositeSide);
}

TEST(Homogeneous, ZeroOrderFollowsRegime) {
  const WaveguideParams p{0.005, kPi / 2.0, 1.0};
  const double x0 = 1.0;
  const auto zero = [&](double x, double k) { return asymptotic_G(x, 2.0, x0, 0.0, k, p, 0); };
  EXPECT_NEAR(std::abs(zero(0.5, 2.5) - 2.0 * H_images(0.5, 2.0, x0, 0.0, 2.5, 1.0).H_a), 0.0, 1e-15);
  EXPECT_EQ(zero(-0.5, 2.5), Complex{});
  for (const double k : {2.0, 1.0}) {
    EXPECT_NEAR(std::abs(zero(0.5, k) - H_free(0.5, 2.0, x0, 0.0, k, 1.0)), 0.0, 1e-15) << k;
  }
  EXPECT_NEAR(std::abs(zero(-0.5, 2.0) - H_free(-0.5, 2.0, x0, 0.0, 2.0, 1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(zero(-0.5, 1.0) + H_free(-0.5, 2.0, x0, 0.0, 1.0, 1.0)), 0.0, 1e-15);
  EXPECT_THROW(asymptotic_G(0.0, 2.0, x0, 0.0, 2.5, p, 0), DomainError);
  EXPECT_THROW(asymptotic_G(0.5, 2.0, x0, 0.0, 2.5, p, 2), DomainError);
}

TEST(Homogeneous, BaseIntegralClosedForm) {
  const double k = 1.6;
  const std::vector<Point2> pts{{0.5, 1.0}, {-0.7, 2.5}, {2.0, 0.3}};
  const Point2 src{0.9, 0.0};
  QuadratureOptions opts;
  opts.tolerance = 1e-10;
  const auto raw = correction_integrals(pts, src, k, 1.0, opts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double s = std::abs(pts[i].x) + std::abs(src.x);
    const Complex expected = base_closed_form(s, pts[i].z, k, 1.0);
    EXPECT_NEAR(std::abs(raw[i].base - expected), 0.0, 1e-7 * std::abs(expected)) << i;
  }
}

TEST(Homogeneous, PsiWeightsSumToTwiceBase) {
  const auto raw = correction_integrals(std::vector<Point2>{{0.4, 1.5}}, Point2{1.0, 0.0}, 2.2, 1.0);
  EXPECT_NEAR(std::abs(raw[0].psi_sym + raw[0].psi_anti - 2.0 * raw[0].base), 0.0, 1e-7);
}

TEST(Homogeneous, PhiGuardsAtTheirResonance) {
  const double nbar = kPi / 2.0;
  EXPECT_THROW(phi_s(0.5, 1.0, 1.0, 0.0, 2.0, 1.0, nbar), DomainError);
  EXPECT_THROW(phi_a(0.5, 1.0, 1.0, 0.0, 1.0, 1.0, nbar), DomainError);
  EXPECT_NO_THROW(phi_s(0.5, 1.0, 1.0, 0.0, 1.0, 1.0, nbar));
  EXPECT_NO_THROW(phi_a(0.5, 1.0, 1.0, 0.0, 2.0, 1.0, nbar));
  EXPECT_THROW(phi_sum_many(std::vector<Point2>{{0.5, 1.0}}, Point2{1.0, 0.0}, 2.0, 1.0, nbar), DomainError);
}

TEST(Homogeneous, PhiFieldsSwitchSignWithSide) {
  const double k = 2.5;
  const double nbar = kPi / 2.0;
  const Complex same = phi_a(0.5, 1.0, 1.0, 0.0, k, 1.0, nbar);
  const Complex opposite = phi_a(-0.5, 1.0, 1.0, 0.0, k, 1.0, nbar);
  EXPECT_NEAR(std::abs(same + opposite), 0.0, 1e-10 * std::abs(same));
  const Complex s_same = phi_s(0.5, 1.0, 1.0, 0.0, k, 1.0, nbar);
  const Complex s_opposite = phi_s(-0.5, 1.0, 1.0, 0.0, k, 1.0, nbar);
  EXPECT_NEAR(std::abs(s_same - s_opposite), 0.0, 1e-10 * std::abs(s_same));
}

TEST(Homogeneous, PhiSumMatchesSingleFields) {
  const double k = 2.5;
  const double nbar = kPi / 2.0;
  const std::vector<Point2> pts{{0.5, 1.0}, {-0.3, 2.0}};
  const Point2 src{1.0, 0.0};
  const auto sum = phi_sum_many(pts, src, k, 1.0, nbar);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Complex expected = phi_s(pts[i].x, pts[i].z, src.x, src.z, k, 1.0, nbar) +
                             phi_a(pts[i].x, pts[i].z, src.x, src.z, k, 1.0, nbar);
    EXPECT_NEAR(std::abs(sum[i] - expected), 0.0, 1e-9 * std::abs(expected));
  }
}

TEST(Homogeneous, FirstOrderImprovesOnZeroOrder) {
  const WaveguideParams p{0.005, kPi / 2.0, 1.0};
  const double k = 2.5;
  const Complex g = green_total(0.6, 2.0, 1.0, 0.0, p, k).total;
  const double err0 = std::abs(g - asymptotic_G(0.6, 2.0, 1.0, 0.0, k, p, 0));
  const double err1 = std::abs(g - asymptotic_G(0.6, 2.0, 1.0, 0.0, k, p, 1));
  EXPECT_LT(err0, 0.05 * std::abs(g));
  EXPECT_LT(err1, 0.2 * err0);
}

}  // namespace
}  // namespace thinwg
