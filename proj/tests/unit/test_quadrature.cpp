#include <gtest/gtest.h>

#include <cmath>
#include <mutex>
#include <vector>

#include "oracles.hpp"
#include "thinwg/quadrature.hpp"

namespace thinwg {
namespace {

SpectralIntegrandContext context(double k, double n, double z, double tol = 1e-10) {
  QuadratureOptions opts;
  opts.tolerance = tol;
  return SpectralIntegrandContext::from(k, n, z, opts);
}

// int_0^inf tau E dtau = -exp(i k n z) / (k z) by the substitution s = sqrt(n^2 - tau^2).
Complex tau_kernel_closed_form(double k, double n, double z) {
  return -std::exp(Complex(0.0, k * n * z)) / (k * z);
}

TEST(Quadrature, SqrtBranch) {
  EXPECT_EQ(sqrt_branch(1.0, 0.0), Complex(1.0, 0.0));
  EXPECT_NEAR(std::abs(sqrt_branch(1.0, 0.6) - Complex(0.8, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(sqrt_branch(1.0, 1.25) - Complex(0.0, 0.75)), 0.0, 1e-15);
  EXPECT_EQ(sqrt_branch(2.0, 2.0), Complex(0.0, 0.0));
}

TEST(Quadrature, SqrtBranchNoCancellationNearCladding) {
  const double n = 1.0;
  const double tau = 1.0 - 1e-12;
  const double exact = std::sqrt((n - tau) * (n + tau));
  EXPECT_NEAR(sqrt_branch(n, tau).real() / exact, 1.0, 1e-10);
}

TEST(Quadrature, PropagationKernelBranches) {
  const double k = 1.7;
  const double dz = 0.9;
  const Complex below(0.6, 0.0);
  const Complex direct = std::exp(kI * k * below * dz) / (kI * below);
  EXPECT_NEAR(std::abs(propagation_kernel(k, below, dz) - direct), 0.0, 1e-14);
  const Complex above(0.0, 0.4);
  const Complex direct_above = std::exp(kI * k * above * dz) / (kI * above);
  EXPECT_NEAR(std::abs(propagation_kernel(k, above, dz) - direct_above), 0.0, 1e-14);
}

TEST(Quadrature, TauWeightedKernelClosedForm) {
  for (const auto [k, n, z] : {std::tuple{1.0, 1.0, 3.0}, std::tuple{2.5, 1.2, 0.7}, std::tuple{0.4, 1.0, 5.0}}) {
    const auto f = [k = k, z = z](double tau, Complex root) { return tau * propagation_kernel(k, root, z); };
    const Complex got = integrate_spectral(f, context(k, n, z));
    EXPECT_NEAR(std::abs(got - tau_kernel_closed_form(k, n, z)), 0.0, 1e-8) << k << " " << n << " " << z;
  }
}

TEST(Quadrature, KernelIntegralIsHankel) {
  for (const auto [k, n, z] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{3.0, 1.0, 0.5}, std::tuple{0.7, 1.4, 4.0}}) {
    const auto f = [k = k, z = z](double, Complex root) { return propagation_kernel(k, root, z); };
    const Complex got = integrate_spectral(f, context(k, n, z)) / (2.0 * kPi);
    EXPECT_NEAR(std::abs(got - oracle::hankel_green_std(k, n, z)), 0.0, 1e-8) << k << " " << n << " " << z;
  }
}

TEST(Quadrature, ExplicitUpperLimit) {
  const double k = 1.1;
  const double n = 1.0;
  const double z = 2.0;
  const double upper = 0.6;
  auto ctx = context(k, n, z);
  ctx.tau_max = upper;
  const auto f = [&](double tau, Complex root) { return tau * propagation_kernel(k, root, z); };
  const double s_upper = std::sqrt(n * n - upper * upper);
  const Complex expected =
      -(std::exp(Complex(0.0, k * n * z)) - std::exp(Complex(0.0, k * s_upper * z))) / (k * z);
  EXPECT_NEAR(std::abs(integrate_spectral(f, ctx) - expected), 0.0, 1e-10);
}

TEST(Quadrature, ZeroIntegrand) {
  const auto f = [](double, Complex) { return Complex{}; };
  EXPECT_EQ(integrate_spectral(f, context(1.0, 1.0, 1.0)), Complex{});
}

TEST(Quadrature, NeverSamplesEndpointsOrCladdingIndex) {
  const double n = 1.3;
  std::vector<double> taus;
  std::mutex m;
  const auto f = [&](double tau, Complex root) {
    std::lock_guard lock(m);
    taus.push_back(tau);
    return propagation_kernel(1.0, root, 1.0);
  };
  const auto ctx = context(1.0, n, 1.0);
  integrate_spectral(f, ctx);
  ASSERT_FALSE(taus.empty());
  const double upper = spectral_tail_limit(ctx);
  for (const double tau : taus) {
    EXPECT_GT(tau, 0.0);
    EXPECT_NE(tau, n);
    EXPECT_LT(tau, upper);
  }
}

TEST(Quadrature, TailLimitGrowsAsSeparationShrinks) {
  const double far = spectral_tail_limit(context(1.0, 1.0, 2.0));
  const double near = spectral_tail_limit(context(1.0, 1.0, 0.1));
  EXPECT_GT(far, 1.0);
  EXPECT_GT(near, far);
  EXPECT_THROW(spectral_tail_limit(context(1.0, 1.0, 0.0)), DomainError);
}

TEST(Quadrature, TighterToleranceStaysWithinLooserOne) {
  const double k = 2.0;
  const double z = 1.5;
  const auto f = [&](double tau, Complex root) { return std::cos(k * tau * 0.8) * propagation_kernel(k, root, z); };
  const Complex loose = integrate_spectral(f, context(k, 1.0, z, 1e-6));
  const Complex tight = integrate_spectral(f, context(k, 1.0, z, 1e-11));
  EXPECT_LT(std::abs(loose - tight), 1e-6);
}

TEST(Quadrature, VectorComponentsMatchScalarCalls) {
  const double k = 1.4;
  const double z = 1.0;
  const auto vec = [&](double tau, Complex root, std::span<Complex> out) {
    out[0] = propagation_kernel(k, root, z);
    out[1] = tau * propagation_kernel(k, root, z);
  };
  const auto res = integrate_spectral(2, vec, context(k, 1.0, z));
  ASSERT_EQ(res.values.size(), 2u);
  EXPECT_GT(res.panels, 0u);
  EXPECT_NEAR(std::abs(res.values[1] - tau_kernel_closed_form(k, 1.0, z)), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(res.values[0] / (2.0 * kPi) - oracle::hankel_green_std(k, 1.0, z)), 0.0, 1e-8);
}

TEST(Quadrature, Deterministic) {
  const auto f = [](double tau, Complex root) { return std::sin(3.0 * tau) * propagation_kernel(1.0, root, 0.3); };
  const Complex a = integrate_spectral(f, context(1.0, 1.0, 0.3));
  const Complex b = integrate_spectral(f, context(1.0, 1.0, 0.3));
  EXPECT_EQ(a, b);
}

TEST(Quadrature, PanelBudgetExceeded) {
  auto ctx = context(1.0, 1.0, 1.0, 1e-14);
  ctx.max_panels = 4;
  const auto f = [](double tau, Complex root) { return std::cos(40.0 * tau) * propagation_kernel(1.0, root, 1.0); };
  EXPECT_THROW(integrate_spectral(f, ctx), QuadratureError);
}

}  // namespace
}  // namespace thinwg
