#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "thinwg/common.hpp"
#include "thinwg/geometry.hpp"
#include "thinwg/quadrature.hpp"
#include "thinwg/waveguide.hpp"

namespace thinwg {

/// How the noise standard deviation is scaled.
///   PerComponent: sd of Re (Im) at a sample is noise_pct |Re| (|Im|) of that sample.
///   ScreenWide:   sd of Re (Im) is noise_pct times the RMS of Re (Im) over the screen.
enum class NoiseScale { PerComponent, ScreenWide };

/// One measurement location, in the lab frame.
struct ScreenPoint {
  double t = 0.0;
  double xp = 0.0;
  double zp = 0.0;
  double w = 0.0;
};

/// Ground truth attached to synthetic data.
struct Provenance {
  WaveguideParams params;
  Pose pose;
};

/// Field samples on a frequency grid. values is row-major [frequency][point].
struct MeasurementSet {
  std::vector<double> frequencies;
  std::vector<ScreenPoint> points;
  std::vector<Complex> values;
  double noise_pct = 0.0;  // fraction: 0.03 is 3%
  std::uint64_t seed = 0;
  double n_cl = 1.0;
  NoiseScale noise_scale = NoiseScale::PerComponent;
  std::optional<Provenance> provenance;

  std::span<const Complex> row(std::size_t f) const;
  std::vector<double> weights() const;

  /// Throws SchemaError on inconsistent dimensions or a non-increasing grid.
  void validate() const;
};

/// Converts geometry samples to lab-frame measurement locations.
std::vector<ScreenPoint> to_screen_points(std::span<const ScreenSample> samples);

/// Per-frequency noise substream: the generator seed depends only on (seed, k),
/// so a frequency gets the same noise however and in whatever order it is acquired.
std::uint64_t noise_stream_seed(std::uint64_t seed, double k);

/// Perturbs one frequency row in place.
void apply_noise(std::span<Complex> row, double k, double noise_pct, std::uint64_t seed,
                 NoiseScale scale);

/// Exact field at the core-frame points of the screen for a source at (x0, 0).
/// Throws GeometryError unless every point has x > h.
std::vector<Complex> exact_screen_field(const WaveguideParams& params, const Pose& pose,
                                        std::span<const ScreenSample> samples, double k,
                                        const QuadratureOptions& opts = {},
                                        SpectrumCache* cache = nullptr);

/// Synthetic data set: exact G on the screen, then noise. Frequencies are evaluated
/// in parallel; the result is independent of scheduling.
MeasurementSet simulate(const WaveguideParams& params, const Pose& pose, const Screen& screen,
                        std::span<const double> freqs, double noise_pct, std::uint64_t seed,
                        NoiseScale scale = NoiseScale::PerComponent,
                        const QuadratureOptions& opts = {});

/// Writes <path> (CSV: k,t,xp,zp,w,re,im) and the sidecar <path stem>.json.
void save(const MeasurementSet& set, const std::filesystem::path& csv_path);

/// Reads a data set written by save. Throws SchemaError on malformed content
/// and std::runtime_error when a file cannot be opened.
MeasurementSet load(const std::filesystem::path& csv_path);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// A requested frequency did not match the available data.
class MissingFrequency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One acquired frequency row. k is the frequency actually delivered, which may
/// differ from the requested one when a source snaps to a stored grid.
struct Acquisition {
  double k = 0.0;
  std::vector<Complex> values;
};

/// Where the inversion gets its measurements from.
class MeasurementSource {
 public:
  virtual ~MeasurementSource() = default;
  virtual std::span<const ScreenPoint> points() const = 0;
  virtual double n_cl() const = 0;
  virtual Acquisition acquire(double k) = 0;
  /// Acquires a batch; the default runs acquire sequentially.
  virtual std::vector<Acquisition> acquire_many(std::span<const double> ks);
  /// Ground truth, when known.
  virtual std::optional<Provenance> provenance() const { return std::nullopt; }
};

/// Simulates measurements on demand. Exact fields are memoised per frequency in a
/// shared cache, so sources that differ only in noise seed reuse each other's work.
class SyntheticSource : public MeasurementSource {
 public:
  struct FieldCache {
    std::mutex mutex;
    std::map<std::uint64_t, std::shared_ptr<const std::vector<Complex>>> fields;
    SpectrumCache spectra;
  };

  SyntheticSource(WaveguideParams params, Pose pose, const Screen& screen, double noise_pct,
                  std::uint64_t seed, NoiseScale scale = NoiseScale::PerComponent,
                  QuadratureOptions opts = {}, std::shared_ptr<FieldCache> cache = nullptr);

  std::span<const ScreenPoint> points() const override { return points_; }
  double n_cl() const override { return params_.n_cl; }
  Acquisition acquire(double k) override;
  std::vector<Acquisition> acquire_many(std::span<const double> ks) override;
  std::optional<Provenance> provenance() const override { return Provenance{params_, pose_}; }

  const std::vector<ScreenSample>& samples() const { return samples_; }
  double noise_pct() const { return noise_pct_; }
  std::uint64_t seed() const { return seed_; }
  NoiseScale noise_scale() const { return scale_; }
  std::size_t fields_computed() const { return computed_; }

 private:
  std::shared_ptr<const std::vector<Complex>> exact(double k);

  WaveguideParams params_;
  Pose pose_;
  std::vector<ScreenSample> samples_;
  std::vector<ScreenPoint> points_;
  double noise_pct_;
  std::uint64_t seed_;
  NoiseScale scale_;
  QuadratureOptions opts_;
  std::shared_ptr<FieldCache> cache_;
  std::size_t computed_ = 0;
};

/// Serves rows of a stored data set. A request snaps to the nearest stored
/// frequency within snap_tolerance, otherwise MissingFrequency is thrown.
class DatasetSource : public MeasurementSource {
 public:
  DatasetSource(MeasurementSet set, double snap_tolerance);

  std::span<const ScreenPoint> points() const override { return set_.points; }
  double n_cl() const override { return set_.n_cl; }
  Acquisition acquire(double k) override;
  std::optional<Provenance> provenance() const override { return set_.provenance; }
  const MeasurementSet& data() const { return set_; }

 private:
  MeasurementSet set_;
  double snap_tolerance_;
};

/// Forwards to another source and keeps every delivered row, so an adaptive
/// acquisition schedule can be replayed from a file.
class RecordingSource : public MeasurementSource {
 public:
  explicit RecordingSource(MeasurementSource& inner) : inner_(inner) {}

  std::span<const ScreenPoint> points() const override { return inner_.points(); }
  double n_cl() const override { return inner_.n_cl(); }
  Acquisition acquire(double k) override;
  std::vector<Acquisition> acquire_many(std::span<const double> ks) override;
  std::optional<Provenance> provenance() const override { return inner_.provenance(); }

  /// Recorded rows as a data set sorted by frequency (duplicates dropped).
  MeasurementSet recorded(double noise_pct, std::uint64_t seed, NoiseScale scale) const;

 private:
  MeasurementSource& inner_;
  std::map<double, std::vector<Complex>> rows_;
};

}  // namespace thinwg
