#include <benchmark/benchmark.h>

#include <vector>

#include "thinwg/homogeneous.hpp"
#include "thinwg/inversion.hpp"
#include "thinwg/specfun.hpp"
#include "thinwg/waveguide.hpp"

namespace {

using namespace thinwg;

const WaveguideParams kParams{0.005, kPi / 2.0, 1.0};
const Pose kPose{1.0, kPi / 20.0};

void BM_HankelGreen(benchmark::State& state) {
  double r = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hankel_green(1.3, 1.0, r));
    r += 1e-6;
  }
}
BENCHMARK(BM_HankelGreen);

void BM_GuidedRoots(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(guided_roots(kParams, 4.5));
}
BENCHMARK(BM_GuidedRoots);

void BM_GreenScreen(benchmark::State& state) {
  const auto samples = sample_screen(Screen::two_segment(0.1, 0.1, -0.4, 0.1, 2.0, 7.0,
                                                         static_cast<int>(state.range(0))),
                                     kPose);
  std::vector<Point2> core;
  for (const auto& s : samples) core.push_back(s.core);
  for (auto _ : state) {
    benchmark::DoNotOptimize(green_total_many(core, Point2{kPose.x0, 0.0}, kParams, 2.5));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(core.size()));
}
BENCHMARK(BM_GreenScreen)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CorrectionIntegrals(benchmark::State& state) {
  const auto samples = sample_screen(Screen::two_segment(), kPose);
  std::vector<Point2> core;
  for (const auto& s : samples) core.push_back(s.core);
  for (auto _ : state) {
    benchmark::DoNotOptimize(correction_integrals(core, Point2{kPose.x0, 0.0}, 2.5, 1.0));
  }
}
BENCHMARK(BM_CorrectionIntegrals)->Unit(benchmark::kMillisecond);

void BM_ResonanceGap(benchmark::State& state) {
  const auto points = to_screen_points(sample_screen(Screen::two_segment(), kPose));
  const std::vector<Complex> field(points.size(), Complex(0.1, -0.2));
  for (auto _ : state) benchmark::DoNotOptimize(resonance_gap(field, points, 2.5, 1.0));
}
BENCHMARK(BM_ResonanceGap);

}  // namespace

BENCHMARK_MAIN();
