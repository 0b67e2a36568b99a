#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "thinwg/synth.hpp"

namespace thinwg {
namespace {

const WaveguideParams kParams{0.05, kPi / 2.0, 1.0};
const Pose kPose{1.0, kPi / 20.0};

Screen small_screen() { return Screen::two_segment(0.1, 0.1, -0.4, 0.1, 2.0, 7.0, 4); }

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "thinwg_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

MeasurementSet tiny_set() {
  MeasurementSet set;
  set.frequencies = {1.0, 1.5};
  set.points = {{0.0, 0.1, 2.0, 0.5}, {1.0, 0.2, 3.0, 0.5}};
  set.values = {{1.0, -2.0}, {0.25, 1e-17}, {-3.5, 0.0}, {1.0 / 3.0, 2.0 / 3.0}};
  set.noise_pct = 0.03;
  set.seed = 42;
  set.provenance = Provenance{kParams, kPose};
  return set;
}

TEST(Synth, NoiseFreeEqualsExactField) {
  const std::vector<double> freqs{1.3, 2.5};
  const auto set = simulate(kParams, kPose, small_screen(), freqs, 0.0, 1);
  const auto samples = sample_screen(small_screen(), kPose);
  for (std::size_t f = 0; f < freqs.size(); ++f) {
    const auto exact = exact_screen_field(kParams, kPose, samples, freqs[f]);
    const auto row = set.row(f);
    for (std::size_t i = 0; i < exact.size(); ++i) EXPECT_EQ(row[i], exact[i]);
  }
}

TEST(Synth, SameSeedSameData) {
  const std::vector<double> freqs{1.3, 2.5};
  const auto a = simulate(kParams, kPose, small_screen(), freqs, 0.05, 9);
  const auto b = simulate(kParams, kPose, small_screen(), freqs, 0.05, 9);
  const auto c = simulate(kParams, kPose, small_screen(), freqs, 0.05, 10);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
}

TEST(Synth, NoiseOfAFrequencyIgnoresAcquisitionOrder) {
  SyntheticSource first(kParams, kPose, small_screen(), 0.03, 5);
  SyntheticSource second(kParams, kPose, small_screen(), 0.03, 5);
  first.acquire(1.1);
  const auto a = first.acquire(2.2);
  const auto b = second.acquire(2.2);
  EXPECT_EQ(a.values, b.values);
}

TEST(Synth, SharedCacheAvoidsRecomputation) {
  auto cache = std::make_shared<SyntheticSource::FieldCache>();
  SyntheticSource a(kParams, kPose, small_screen(), 0.03, 1, NoiseScale::PerComponent, {}, cache);
  SyntheticSource b(kParams, kPose, small_screen(), 0.03, 2, NoiseScale::PerComponent, {}, cache);
  a.acquire(1.7);
  b.acquire(1.7);
  EXPECT_EQ(a.fields_computed() + b.fields_computed(), 1u);
}

TEST(Synth, PerComponentNoiseStatistics) {
  std::vector<Complex> row(40000, Complex(2.0, -4.0));
  apply_noise(row, 1.0, 0.05, 77, NoiseScale::PerComponent);
  double mean_re = 0.0;
  double mean_im = 0.0;
  for (const auto& v : row) {
    mean_re += (v.real() - 2.0) / 2.0;
    mean_im += (v.imag() + 4.0) / 4.0;
  }
  mean_re /= row.size();
  mean_im /= row.size();
  double var_re = 0.0;
  double var_im = 0.0;
  double cov = 0.0;
  for (const auto& v : row) {
    const double er = (v.real() - 2.0) / 2.0 - mean_re;
    const double ei = (v.imag() + 4.0) / 4.0 - mean_im;
    var_re += er * er;
    var_im += ei * ei;
    cov += er * ei;
  }
  const double n = static_cast<double>(row.size());
  EXPECT_NEAR(std::sqrt(var_re / n), 0.05, 0.05 * 0.02);
  EXPECT_NEAR(std::sqrt(var_im / n), 0.05, 0.05 * 0.02);
  EXPECT_LT(std::abs(mean_re), 0.002);
  EXPECT_LT(std::abs(cov / std::sqrt(var_re * var_im)), 0.02);
}

TEST(Synth, ScreenWideNoiseUsesRowRms) {
  std::vector<Complex> row(20000, Complex(3.0, 0.0));
  row[0] = Complex(0.0, 0.0);
  apply_noise(row, 2.0, 0.1, 3, NoiseScale::ScreenWide);
  EXPECT_NE(row[0].real(), 0.0);
  EXPECT_EQ(row[1].imag(), 0.0);
}

TEST(Synth, ZeroNoiseLeavesRowUntouched) {
  std::vector<Complex> row{{1.0, 2.0}, {3.0, 4.0}};
  const auto copy = row;
  apply_noise(row, 1.0, 0.0, 1, NoiseScale::PerComponent);
  EXPECT_EQ(row, copy);
  EXPECT_THROW(apply_noise(row, 1.0, -0.1, 1, NoiseScale::PerComponent), DomainError);
}

TEST(Synth, ScreenInsideCoreRejected) {
  const Screen low = Screen::two_segment(0.0, -1.0, 0.0, -1.0, 2.0, 7.0, 4);
  const std::vector<double> freqs{1.0};
  EXPECT_THROW(simulate(kParams, kPose, low, freqs, 0.0, 1), GeometryError);
}

TEST(Synth, SaveLoadRoundTripIsBitExact) {
  const auto path = temp_file("roundtrip.csv");
  const auto set = tiny_set();
  save(set, path);
  const auto back = load(path);
  EXPECT_EQ(back.frequencies, set.frequencies);
  EXPECT_EQ(back.values, set.values);
  ASSERT_EQ(back.points.size(), set.points.size());
  EXPECT_EQ(back.points[1].zp, set.points[1].zp);
  EXPECT_EQ(back.noise_pct, set.noise_pct);
  EXPECT_EQ(back.seed, set.seed);
  ASSERT_TRUE(back.provenance.has_value());
  EXPECT_EQ(back.provenance->params.h, kParams.h);
  EXPECT_EQ(back.provenance->pose.alpha, kPose.alpha);
}

TEST(Synth, TruncatedFileRejected) {
  const auto path = temp_file("truncated.csv");
  save(tiny_set(), path);
  std::stringstream kept;
  {
    std::ifstream in(path);
    std::string line;
    for (int i = 0; i < 4 && std::getline(in, line); ++i) kept << line << '\n';
  }
  std::ofstream(path) << kept.str();
  EXPECT_THROW(load(path), SchemaError);
}

TEST(Synth, MismatchedSidecarRejected) {
  const auto path = temp_file("mismatch.csv");
  auto set = tiny_set();
  save(set, path);
  set.frequencies = {1.0};
  set.values.resize(2);
  const auto other = temp_file("mismatch_other.csv");
  save(set, other);
  std::filesystem::copy_file(sidecar_path(other), sidecar_path(path),
                             std::filesystem::copy_options::overwrite_existing);
  EXPECT_THROW(load(path), SchemaError);
}

TEST(Synth, BadHeaderAndFieldsRejected) {
  const auto path = temp_file("header.csv");
  save(tiny_set(), path);
  std::ofstream(path) << "k,t,x,z\n";
  EXPECT_THROW(load(path), SchemaError);
  std::ofstream(path) << "k,t,xp,zp,w,re,im\n1,0,0.1,2,0.5,abc,0\n";
  EXPECT_THROW(load(path), SchemaError);
}

TEST(Synth, MissingFileIsIoError) {
  EXPECT_THROW(load(temp_file("does_not_exist.csv")), std::runtime_error);
}

TEST(Synth, DatasetSourceSnapsWithinTolerance) {
  DatasetSource source(tiny_set(), 0.1);
  const auto a = source.acquire(1.04);
  EXPECT_EQ(a.k, 1.0);
  EXPECT_EQ(a.values[0], Complex(1.0, -2.0));
  EXPECT_THROW(source.acquire(1.25), MissingFrequency);
}

TEST(Synth, RecordingSourceReplaysAcquisitions) {
  DatasetSource inner(tiny_set(), 0.1);
  RecordingSource recorder(inner);
  recorder.acquire(1.5);
  recorder.acquire(1.0);
  recorder.acquire(1.5);
  const auto set = recorder.recorded(0.0, 0, NoiseScale::PerComponent);
  EXPECT_EQ(set.frequencies, (std::vector<double>{1.0, 1.5}));
  EXPECT_EQ(set.values, tiny_set().values);
}

TEST(Synth, ValidateRejectsBadShape) {
  auto set = tiny_set();
  set.values.pop_back();
  EXPECT_THROW(set.validate(), SchemaError);
  set = tiny_set();
  set.frequencies = {1.5, 1.0};
  EXPECT_THROW(set.validate(), SchemaError);
}

}  // namespace
}  // namespace thinwg
