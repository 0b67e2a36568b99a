#include "thinwg/synth.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "thinwg/parallel.hpp"

namespace thinwg {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Box-Muller on a 64-bit Mersenne Twister; spelled out so the stream is the
// same on every standard library.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

double parse_double(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw SchemaError("dataset line " + std::to_string(line) + ": cannot parse number '" +
                      std::string(field) + "'");
  }
  return value;
}

const char* scale_name(NoiseScale scale) {
  return scale == NoiseScale::PerComponent ? "per_component" : "screen_wide";
}

NoiseScale parse_scale(const std::string& name) {
  if (name == "per_component") return NoiseScale::PerComponent;
  if (name == "screen_wide") return NoiseScale::ScreenWide;
  throw SchemaError("dataset sidecar: unknown noise_scale '" + name + "'");
}

constexpr const char* kCsvHeader = "k,t,xp,zp,w,re,im";

}  // namespace

std::span<const Complex> MeasurementSet::row(std::size_t f) const {
  return std::span<const Complex>(values).subspan(f * points.size(), points.size());
}

std::vector<double> MeasurementSet::weights() const {
  std::vector<double> w(points.size());
  std::transform(points.begin(), points.end(), w.begin(), [](const ScreenPoint& p) { return p.w; });
  return w;
}

void MeasurementSet::validate() const {
  if (points.empty()) throw SchemaError("MeasurementSet: no screen points");
  if (values.size() != frequencies.size() * points.size()) {
    throw SchemaError("MeasurementSet: value matrix is " + std::to_string(values.size()) +
                      " entries, expected " + std::to_string(frequencies.size()) + " x " +
                      std::to_string(points.size()));
  }
  for (std::size_t i = 1; i < frequencies.size(); ++i) {
    if (!(frequencies[i] > frequencies[i - 1])) {
      throw SchemaError("MeasurementSet: frequencies must be strictly increasing");
    }
  }
  if (!(noise_pct >= 0.0)) throw SchemaError("MeasurementSet: noise_pct must be >= 0");
}

std::vector<ScreenPoint> to_screen_points(std::span<const ScreenSample> samples) {
  std::vector<ScreenPoint> points;
  points.reserve(samples.size());
  for (const auto& s : samples) points.push_back({s.t, s.lab.x, s.lab.z, s.w});
  return points;
}

std::uint64_t noise_stream_seed(std::uint64_t seed, double k) {
  return splitmix64(seed ^ splitmix64(std::bit_cast<std::uint64_t>(k)));
}

void apply_noise(std::span<Complex> row, double k, double noise_pct, std::uint64_t seed,
                 NoiseScale scale) {
  if (noise_pct == 0.0) return;
  if (!(noise_pct > 0.0)) throw DomainError("apply_noise: noise_pct must be >= 0");
  double rms_re = 0.0;
  double rms_im = 0.0;
  if (scale == NoiseScale::ScreenWide) {
    for (const auto& v : row) {
      rms_re += v.real() * v.real();
      rms_im += v.imag() * v.imag();
    }
    rms_re = std::sqrt(rms_re / static_cast<double>(row.size()));
    rms_im = std::sqrt(rms_im / static_cast<double>(row.size()));
  }
  NormalStream normal(noise_stream_seed(seed, k));
  for (auto& v : row) {
    const double sd_re = noise_pct * (scale == NoiseScale::PerComponent ? std::abs(v.real()) : rms_re);
    const double sd_im = noise_pct * (scale == NoiseScale::PerComponent ? std::abs(v.imag()) : rms_im);
    const double e_re = normal.next();
    const double e_im = normal.next();
    v = Complex(v.real() + sd_re * e_re, v.imag() + sd_im * e_im);
  }
}

std::vector<Complex> exact_screen_field(const WaveguideParams& params, const Pose& pose,
                                        std::span<const ScreenSample> samples, double k,
                                        const QuadratureOptions& opts, SpectrumCache* cache) {
  std::vector<Point2> core;
  core.reserve(samples.size());
  for (const auto& s : samples) {
    if (!(s.core.x > params.h)) {
      throw GeometryError("simulate: screen point at core-frame x = " + format_number(s.core.x) +
                          " is not above the core (h = " + format_number(params.h) + ")");
    }
    core.push_back(s.core);
  }
  const auto parts = green_total_many(core, Point2{pose.x0, 0.0}, params, k, opts, cache);
  std::vector<Complex> field(parts.size());
  std::transform(parts.begin(), parts.end(), field.begin(), [](const GreenParts& p) { return p.total; });
  return field;
}

MeasurementSet simulate(const WaveguideParams& params, const Pose& pose, const Screen& screen,
                        std::span<const double> freqs, double noise_pct, std::uint64_t seed,
                        NoiseScale scale, const QuadratureOptions& opts) {
  params.validate();
  const auto samples = sample_screen(screen, pose);
  MeasurementSet set;
  set.frequencies.assign(freqs.begin(), freqs.end());
  set.points = to_screen_points(samples);
  set.noise_pct = noise_pct;
  set.seed = seed;
  set.n_cl = params.n_cl;
  set.noise_scale = scale;
  set.provenance = Provenance{params, pose};
  set.values.resize(freqs.size() * samples.size());
  for (std::size_t i = 1; i < freqs.size(); ++i) {
    if (!(freqs[i] > freqs[i - 1])) throw DomainError("simulate: frequencies must increase");
  }
  for (const auto& s : samples) {
    if (!(s.core.x > params.h)) {
      throw GeometryError("simulate: screen point at core-frame x = " + format_number(s.core.x) +
                          " is not above the core");
    }
  }
  SpectrumCache cache;
  parallel_for(freqs.size(), [&](std::size_t f) {
    auto field = exact_screen_field(params, pose, samples, freqs[f], opts, &cache);
    apply_noise(field, freqs[f], noise_pct, seed, scale);
    std::copy(field.begin(), field.end(), set.values.begin() + static_cast<std::ptrdiff_t>(f * samples.size()));
  });
  return set;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

void save(const MeasurementSet& set, const std::filesystem::path& csv_path) {
  set.validate();
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("save: cannot open " + csv_path.string());
  csv << kCsvHeader << '\n';
  for (std::size_t f = 0; f < set.frequencies.size(); ++f) {
    const std::string k = format_number(set.frequencies[f]);
    const auto row = set.row(f);
    for (std::size_t i = 0; i < set.points.size(); ++i) {
      const auto& p = set.points[i];
      csv << k << ',' << format_number(p.t) << ',' << format_number(p.xp) << ','
          << format_number(p.zp) << ',' << format_number(p.w) << ','
          << format_number(row[i].real()) << ',' << format_number(row[i].imag()) << '\n';
    }
  }
  if (!csv) throw std::runtime_error("save: write failed for " + csv_path.string());

  nlohmann::json meta;
  meta["format"] = "thinwg-measurements";
  meta["version"] = 1;
  meta["noise_pct"] = set.noise_pct;
  meta["noise_scale"] = scale_name(set.noise_scale);
  meta["seed"] = set.seed;
  meta["n_cl"] = set.n_cl;
  meta["num_points"] = set.points.size();
  meta["num_frequencies"] = set.frequencies.size();
  if (set.provenance) {
    const auto& t = *set.provenance;
    meta["truth"] = {{"h", t.params.h},   {"nbar", t.params.nbar}, {"n_cl", t.params.n_cl},
                     {"x0", t.pose.x0},   {"alpha", t.pose.alpha}};
  } else {
    meta["truth"] = nullptr;
  }
  std::ofstream side(sidecar_path(csv_path));
  if (!side) throw std::runtime_error("save: cannot open " + sidecar_path(csv_path).string());
  side << meta.dump(2) << '\n';
}

MeasurementSet load(const std::filesystem::path& csv_path) {
  std::ifstream side(sidecar_path(csv_path));
  if (!side) throw std::runtime_error("load: cannot open " + sidecar_path(csv_path).string());
  nlohmann::json meta;
  try {
    side >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("dataset sidecar: ") + e.what());
  }

  MeasurementSet set;
  std::size_t num_points = 0;
  std::size_t num_freqs = 0;
  try {
    set.noise_pct = meta.at("noise_pct").get<double>();
    set.seed = meta.at("seed").get<std::uint64_t>();
    set.n_cl = meta.at("n_cl").get<double>();
    set.noise_scale = parse_scale(meta.value("noise_scale", std::string("per_component")));
    num_points = meta.at("num_points").get<std::size_t>();
    num_freqs = meta.at("num_frequencies").get<std::size_t>();
    if (meta.contains("truth") && !meta["truth"].is_null()) {
      const auto& t = meta["truth"];
      Provenance prov;
      prov.params = {t.at("h").get<double>(), t.at("nbar").get<double>(), t.at("n_cl").get<double>()};
      prov.pose = {t.at("x0").get<double>(), t.at("alpha").get<double>()};
      set.provenance = prov;
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("dataset sidecar: ") + e.what());
  }

  std::ifstream csv(csv_path);
  if (!csv) throw std::runtime_error("load: cannot open " + csv_path.string());
  std::string line;
  if (!std::getline(csv, line) || line != kCsvHeader) {
    throw SchemaError("dataset: missing or unexpected header (want '" + std::string(kCsvHeader) + "')");
  }
  std::size_t line_no = 1;
  double current_k = 0.0;
  std::size_t in_row = 0;
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<std::string_view, 7> fields;
    std::size_t count = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      if (count == fields.size()) {
        throw SchemaError("dataset line " + std::to_string(line_no) + ": too many fields");
      }
      fields[count++] = rest.substr(0, comma);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (count != fields.size()) {
      throw SchemaError("dataset line " + std::to_string(line_no) + ": expected 7 fields, got " +
                        std::to_string(count));
    }
    std::array<double, 7> v{};
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = parse_double(fields[i], line_no);

    const bool new_row = set.frequencies.empty() || v[0] != current_k;
    if (new_row) {
      if (!set.frequencies.empty() && in_row != set.points.size()) {
        throw SchemaError("dataset: frequency " + format_number(current_k) + " has " +
                          std::to_string(in_row) + " points, expected " +
                          std::to_string(set.points.size()));
      }
      current_k = v[0];
      set.frequencies.push_back(current_k);
      in_row = 0;
    }
    const ScreenPoint p{v[1], v[2], v[3], v[4]};
    if (set.frequencies.size() == 1) {
      set.points.push_back(p);
    } else {
      if (in_row >= set.points.size()) {
        throw SchemaError("dataset line " + std::to_string(line_no) + ": too many points for frequency " +
                          format_number(current_k));
      }
      const auto& ref = set.points[in_row];
      if (ref.t != p.t || ref.xp != p.xp || ref.zp != p.zp || ref.w != p.w) {
        throw SchemaError("dataset line " + std::to_string(line_no) +
                          ": screen point differs from the first frequency block");
      }
    }
    set.values.emplace_back(v[5], v[6]);
    ++in_row;
  }
  if (set.frequencies.empty()) throw SchemaError("dataset: no data rows");
  if (in_row != set.points.size()) {
    throw SchemaError("dataset: last frequency block is truncated (" + std::to_string(in_row) +
                      " of " + std::to_string(set.points.size()) + " points)");
  }
  if (set.points.size() != num_points || set.frequencies.size() != num_freqs) {
    throw SchemaError("dataset: shape " + std::to_string(set.frequencies.size()) + " x " +
                      std::to_string(set.points.size()) + " does not match sidecar " +
                      std::to_string(num_freqs) + " x " + std::to_string(num_points));
  }
  set.validate();
  return set;
}

std::vector<Acquisition> MeasurementSource::acquire_many(std::span<const double> ks) {
  std::vector<Acquisition> out;
  out.reserve(ks.size());
  for (const double k : ks) out.push_back(acquire(k));
  return out;
}

SyntheticSource::SyntheticSource(WaveguideParams params, Pose pose, const Screen& screen,
                                 double noise_pct, std::uint64_t seed, NoiseScale scale,
                                 QuadratureOptions opts, std::shared_ptr<FieldCache> cache)
    : params_(params),
      pose_(pose),
      samples_(sample_screen(screen, pose)),
      points_(to_screen_points(samples_)),
      noise_pct_(noise_pct),
      seed_(seed),
      scale_(scale),
      opts_(opts),
      cache_(cache ? std::move(cache) : std::make_shared<FieldCache>()) {
  params_.validate();
  if (!(noise_pct >= 0.0)) throw DomainError("SyntheticSource: noise_pct must be >= 0");
  for (const auto& s : samples_) {
    if (!(s.core.x > params_.h)) {
      throw GeometryError("SyntheticSource: screen point at core-frame x = " +
                          format_number(s.core.x) + " is not above the core");
    }
  }
}

std::shared_ptr<const std::vector<Complex>> SyntheticSource::exact(double k) {
  const auto key = std::bit_cast<std::uint64_t>(k);
  {
    const std::lock_guard lock(cache_->mutex);
    const auto it = cache_->fields.find(key);
    if (it != cache_->fields.end()) return it->second;
  }
  auto field = std::make_shared<const std::vector<Complex>>(
      exact_screen_field(params_, pose_, samples_, k, opts_, &cache_->spectra));
  const std::lock_guard lock(cache_->mutex);
  ++computed_;
  return cache_->fields.try_emplace(key, std::move(field)).first->second;
}

Acquisition SyntheticSource::acquire(double k) {
  if (!(k > 0.0)) throw DomainError("SyntheticSource: k must be positive");
  Acquisition a{k, *exact(k)};
  apply_noise(a.values, k, noise_pct_, seed_, scale_);
  return a;
}

std::vector<Acquisition> SyntheticSource::acquire_many(std::span<const double> ks) {
  std::vector<Acquisition> out(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) { out[i] = acquire(ks[i]); });
  return out;
}

DatasetSource::DatasetSource(MeasurementSet set, double snap_tolerance)
    : set_(std::move(set)), snap_tolerance_(snap_tolerance) {
  set_.validate();
  if (set_.frequencies.empty()) throw SchemaError("DatasetSource: data set has no frequencies");
}

Acquisition DatasetSource::acquire(double k) {
  const auto& f = set_.frequencies;
  const auto it = std::lower_bound(f.begin(), f.end(), k);
  std::size_t best = static_cast<std::size_t>(it - f.begin());
  if (best == f.size() || (best > 0 && std::abs(f[best - 1] - k) <= std::abs(f[best] - k))) {
    best = best == 0 ? 0 : best - 1;
  }
  if (std::abs(f[best] - k) > snap_tolerance_) {
    throw MissingFrequency("data set has no frequency within " + format_number(snap_tolerance_) +
                           " of k = " + format_number(k) + " (nearest " + format_number(f[best]) +
                           ")");
  }
  const auto row = set_.row(best);
  return {f[best], std::vector<Complex>(row.begin(), row.end())};
}

Acquisition RecordingSource::acquire(double k) {
  auto a = inner_.acquire(k);
  rows_.insert_or_assign(a.k, a.values);
  return a;
}

std::vector<Acquisition> RecordingSource::acquire_many(std::span<const double> ks) {
  auto batch = inner_.acquire_many(ks);
  for (const auto& a : batch) rows_.insert_or_assign(a.k, a.values);
  return batch;
}

MeasurementSet RecordingSource::recorded(double noise_pct, std::uint64_t seed,
                                         NoiseScale scale) const {
  MeasurementSet set;
  const auto pts = inner_.points();
  set.points.assign(pts.begin(), pts.end());
  set.noise_pct = noise_pct;
  set.seed = seed;
  set.n_cl = inner_.n_cl();
  set.noise_scale = scale;
  set.provenance = inner_.provenance();
  for (const auto& [k, row] : rows_) {
    set.frequencies.push_back(k);
    set.values.insert(set.values.end(), row.begin(), row.end());
  }
  return set;
}

}  // namespace thinwg
