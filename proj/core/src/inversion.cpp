#include "thinwg/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <json.hpp>

#include "thinwg/homogeneous.hpp"
#include "thinwg/specfun.hpp"

namespace thinwg {
namespace {

double lab_radius(const ScreenPoint& p) { return std::hypot(p.xp, p.zp); }

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

double row_gap(std::span<const Complex> a, std::span<const Complex> b,
               std::span<const ScreenPoint> points) {
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) sum += points[i].w * std::norm(a[i] - b[i]);
  return std::sqrt(sum);
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  std::vector<double> ks;
  ks.reserve(n + 1);
  for (std::size_t j = 0; j <= n; ++j) ks.push_back(std::min(hi, lo + static_cast<double>(j) * step));
  return ks;
}

void record(MeasurementSource& source, std::span<const double> ks, ResonanceScan& scan) {
  std::vector<double> fresh;
  for (const double k : ks) {
    if (!scan.samples.contains(k)) fresh.push_back(k);
  }
  const auto acquired = source.acquire_many(fresh);
  for (const auto& a : acquired) {
    scan.samples[a.k] = resonance_gap(a.values, source.points(), a.k, source.n_cl());
  }
}

// Window samples sorted by k.
std::vector<std::pair<double, double>> window_samples(const ResonanceScan& scan, double lo,
                                                      double hi) {
  std::vector<std::pair<double, double>> out;
  for (auto it = scan.samples.lower_bound(lo); it != scan.samples.end() && it->first <= hi; ++it) {
    out.emplace_back(it->first, it->second);
  }
  return out;
}

// Forwards to a source and counts delivered rows.
class CountingSource : public MeasurementSource {
 public:
  explicit CountingSource(MeasurementSource& inner) : inner_(inner) {}
  std::span<const ScreenPoint> points() const override { return inner_.points(); }
  double n_cl() const override { return inner_.n_cl(); }
  Acquisition acquire(double k) override {
    ++count_;
    return inner_.acquire(k);
  }
  std::vector<Acquisition> acquire_many(std::span<const double> ks) override {
    count_ += ks.size();
    return inner_.acquire_many(ks);
  }
  std::optional<Provenance> provenance() const override { return inner_.provenance(); }
  std::size_t count() const { return count_; }

 private:
  MeasurementSource& inner_;
  std::size_t count_ = 0;
};

// Pose objective with the pose-independent direct term precomputed.
class PoseObjective {
 public:
  PoseObjective(std::span<const Acquisition> data, std::span<const ScreenPoint> points, double n_cl)
      : data_(data), points_(points), n_cl_(n_cl) {
    residual_base_.reserve(data.size());
    for (const auto& a : data) {
      std::vector<Complex> base(points.size());
      for (std::size_t i = 0; i < points.size(); ++i) {
        base[i] = a.values[i] - hankel_green(a.k, n_cl, lab_radius(points[i]));
      }
      residual_base_.push_back(std::move(base));
    }
  }

  double operator()(const Pose& pose) const {
    double total = 0.0;
    for (std::size_t f = 0; f < data_.size(); ++f) {
      const double k = data_[f].k;
      for (std::size_t i = 0; i < points_.size(); ++i) {
        const Point2 core = transform(pose, {points_[i].xp, points_[i].zp});
        const double mirror = std::hypot(core.x + pose.x0, core.z);
        // G - 2 H_a = (G - H) + H(mirror)
        const Complex r = residual_base_[f][i] + hankel_green(k, n_cl_, mirror);
        total += points_[i].w * std::norm(r);
      }
    }
    return total;
  }

 private:
  std::span<const Acquisition> data_;
  std::span<const ScreenPoint> points_;
  double n_cl_;
  std::vector<std::vector<Complex>> residual_base_;
};

double rel_error(double estimate, double truth) { return std::abs(estimate - truth) / std::abs(truth); }

}  // namespace

double resonance_gap(std::span<const Complex> measured, std::span<const ScreenPoint> points,
                     double k, double n_cl) {
  if (measured.size() != points.size()) {
    throw std::invalid_argument("resonance_gap: measurement and screen sizes differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sum += points[i].w * std::norm(measured[i] - hankel_green(k, n_cl, lab_radius(points[i])));
  }
  return std::sqrt(sum);
}

double ResonanceScan::khat1() const {
  if (peaks.empty()) throw InversionError("step1", "no resonance detected");
  return peaks.front().k_hat;
}

double ResonanceScan::nbar_hat() const { return kPi / (2.0 * khat1()); }

ResonanceScan step1_scan(MeasurementSource& source, const Step1Options& opts) {
  if (!(opts.k_max > opts.k_min) || !(opts.k_min > 0.0)) {
    throw InversionError("step1", "empty or invalid frequency range");
  }
  if (opts.coarse_steps < 2 || opts.refine_factor < 1) {
    throw InversionError("step1", "coarse_steps must be >= 2 and refine_factor >= 1");
  }
  const double dk = (opts.k_max - opts.k_min) / opts.coarse_steps;
  std::vector<double> grid(static_cast<std::size_t>(opts.coarse_steps) + 1);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    grid[j] = (j + 1 == grid.size()) ? opts.k_max : opts.k_min + static_cast<double>(j) * dk;
  }

  ResonanceScan scan;
  const auto coarse = source.acquire_many(grid);
  const auto points = source.points();
  const double n_cl = source.n_cl();
  for (const auto& a : coarse) {
    const double e = resonance_gap(a.values, points, a.k, n_cl);
    scan.k.push_back(a.k);
    scan.e.push_back(e);
    scan.samples[a.k] = e;
  }
  for (std::size_t j = 0; j + 1 < coarse.size(); ++j) {
    scan.deriv.push_back(row_gap(coarse[j + 1].values, coarse[j].values, points));
  }
  scan.threshold = opts.prominence * median(scan.deriv);

  const std::size_t m = scan.deriv.size();
  for (std::size_t j = 0; j < m; ++j) {
    if (static_cast<int>(scan.peaks.size()) >= opts.max_peaks) break;
    const double d = scan.deriv[j];
    const bool left_ok = (j == 0) || d >= scan.deriv[j - 1];
    const bool right_ok = (j + 1 == m) || d > scan.deriv[j + 1];
    if (!(left_ok && right_ok && d > scan.threshold)) continue;
    const double k_coarse = 0.5 * (scan.k[j] + scan.k[j + 1]);
    if (!scan.peaks.empty()) {
      const double prev = scan.peaks.back().k_hat;
      if (std::abs(k_coarse - prev) <= opts.refine_halfwidth * prev) continue;
    }
    const double lo = (1.0 - opts.refine_halfwidth) * k_coarse;
    const double hi = (1.0 + opts.refine_halfwidth) * k_coarse;
    const auto fine = uniform_grid(lo, hi, dk / opts.refine_factor);
    record(source, fine, scan);
    const auto window = window_samples(scan, lo, hi);
    const auto best = std::min_element(window.begin(), window.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
    Peak peak;
    peak.p = static_cast<int>(scan.peaks.size()) + 1;
    peak.k_coarse = k_coarse;
    peak.k_hat = best->first;
    peak.e_min = best->second;
    scan.peaks.push_back(peak);
  }
  if (scan.peaks.empty()) {
    throw InversionError("step1", "no derivative-norm peak above the threshold in [" +
                                      std::to_string(opts.k_min) + ", " +
                                      std::to_string(opts.k_max) + "]");
  }
  if (opts.nbar_hint) {
    const double rel = std::abs(scan.nbar_hat() - *opts.nbar_hint) / *opts.nbar_hint;
    scan.hint_consistent = rel <= opts.hint_tolerance;
  }
  return scan;
}

void sample_peak_windows(MeasurementSource& source, ResonanceScan& scan,
                         const PeakWidthOptions& opts) {
  if (opts.window_points < 2) throw InversionError("step3", "window_points must be >= 2");
  const double k1 = scan.khat1();
  for (const auto& peak : scan.peaks) {
    const double lo = peak.k_hat - 0.5 * k1;
    const double hi = peak.k_hat + 0.5 * k1;
    record(source, uniform_grid(lo, hi, (hi - lo) / opts.window_points), scan);
    for (int pass = 0; pass < opts.max_refinements; ++pass) {
      const auto window = window_samples(scan, lo, hi);
      double e_min = std::numeric_limits<double>::infinity();
      double e_max = -e_min;
      for (const auto& [k, e] : window) {
        e_min = std::min(e_min, e);
        e_max = std::max(e_max, e);
      }
      const double bar = e_min + opts.beta * (e_max - e_min);
      std::size_t first = window.size();
      std::size_t last = 0;
      int count = 0;
      for (std::size_t i = 0; i < window.size(); ++i) {
        if (window[i].second <= bar) {
          ++count;
          first = std::min(first, i);
          last = i;
        }
      }
      if (count >= opts.min_b_samples || first == window.size()) break;
      const double a = window[first == 0 ? 0 : first - 1].first;
      const double b = window[std::min(last + 1, window.size() - 1)].first;
      const int fill = 4 * opts.min_b_samples;
      std::vector<double> ks;
      for (int i = 1; i < fill; ++i) ks.push_back(a + (b - a) * i / fill);
      const std::size_t before = scan.samples.size();
      record(source, ks, scan);
      if (scan.samples.size() == before) break;  // source cannot resolve further
    }
  }
}

PeakWidth step3_peak_width(const ResonanceScan& scan, double beta, int p) {
  if (p < 1 || p > static_cast<int>(scan.peaks.size())) {
    throw InversionError("step3", "peak " + std::to_string(p) + " was not detected");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) throw InversionError("step3", "beta must lie in [0, 1]");
  const double k1 = scan.khat1();
  const double kp = scan.peaks[static_cast<std::size_t>(p - 1)].k_hat;
  PeakWidth width;
  width.window_lo = kp - 0.5 * k1;
  width.window_hi = kp + 0.5 * k1;
  const double span = width.window_hi - width.window_lo;
  const auto window = window_samples(scan, width.window_lo, width.window_hi);
  const double slack = span / 100.0;
  if (window.size() < 3 || window.front().first - width.window_lo > slack ||
      width.window_hi - window.back().first > slack) {
    throw InversionError("step3", "samples do not cover the window of peak " + std::to_string(p));
  }
  double e_min = std::numeric_limits<double>::infinity();
  double e_max = -e_min;
  for (const auto& [k, e] : window) {
    e_min = std::min(e_min, e);
    e_max = std::max(e_max, e);
  }
  width.degenerate = !(e_max > e_min);
  const double bar = e_min + beta * (e_max - e_min);
  double measure = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (!(window[i].second <= bar)) continue;
    const double left = (i == 0) ? width.window_lo : 0.5 * (window[i - 1].first + window[i].first);
    const double right =
        (i + 1 == window.size()) ? width.window_hi : 0.5 * (window[i].first + window[i + 1].first);
    measure += right - left;
    ++width.b_samples;
  }
  width.delta = 0.5 * measure;
  return width;
}

double pose_objective(std::span<const Acquisition> data, std::span<const ScreenPoint> points,
                      double n_cl, const Pose& pose) {
  return PoseObjective(data, points, n_cl)(pose);
}

PoseFit step2_fit_pose(MeasurementSource& source, double khat1, std::span<const Peak> peaks,
                       std::span<const double> widths, const Step2Options& opts) {
  if (opts.k_factors.empty()) throw InversionError("step2", "no frequencies in K");
  if (opts.x0_scan_points < 2 || !(opts.x0_scan_max > opts.x0_scan_min) || !(opts.x0_scan_min > 0.0)) {
    throw InversionError("step2", "invalid x0 scan range");
  }
  std::vector<double> ks;
  for (const double factor : opts.k_factors) {
    double k = factor * khat1;
    for (std::size_t p = 0; p < peaks.size() && p < widths.size(); ++p) {
      const double gap = k - peaks[p].k_hat;
      if (widths[p] > 0.0 && std::abs(gap) < widths[p]) k += (gap >= 0.0 ? 1.0 : -1.0) * widths[p];
    }
    ks.push_back(k);
  }
  const auto data = source.acquire_many(ks);
  const PoseObjective objective(data, source.points(), source.n_cl());

  PoseFit fit;
  for (const auto& a : data) fit.frequencies.push_back(a.k);
  const double log_lo = std::log(opts.x0_scan_min);
  const double log_hi = std::log(opts.x0_scan_max);
  double best_x0 = opts.x0_scan_min;
  double best_f = std::numeric_limits<double>::infinity();
  for (int i = 0; i < opts.x0_scan_points; ++i) {
    const double x0 = std::exp(log_lo + (log_hi - log_lo) * i / (opts.x0_scan_points - 1));
    const double f = objective(Pose{x0, 0.0});
    if (f < best_f) {
      best_f = f;
      best_x0 = x0;
    }
  }
  fit.initial = Pose{best_x0, 0.0};
  fit.initial_objective = best_f;

  const Objective f = [&](std::span<const double> v) {
    if (!(std::abs(v[1]) < 0.5 * kPi) || !std::isfinite(v[0])) return HUGE_VAL;
    return objective(Pose{std::exp(v[0]), v[1]});
  };
  auto nm_opts = opts.nelder_mead;
  if (nm_opts.initial_step.empty()) nm_opts.initial_step = opts.initial_step;
  const std::vector<double> start{std::log(best_x0), 0.0};
  const auto result = nelder_mead(f, start, nm_opts);
  fit.pose = Pose{std::exp(result.x[0]), result.x[1]};
  fit.objective = result.f;
  fit.iterations = result.iterations;
  fit.converged = result.converged;
  fit.history = result.best_history;
  return fit;
}

LinearizedEstimate step3_h_linearized(const Acquisition& measured,
                                      std::span<const ScreenPoint> points, const Pose& pose,
                                      double nbar, double n_cl, double nonres_eps,
                                      const QuadratureOptions& quad) {
  const double k = measured.k;
  const double arg = k * nbar;
  if (std::abs(std::sin(arg)) <= nonres_eps || std::abs(std::cos(arg)) <= nonres_eps) {
    throw InversionError("step3", "k = " + std::to_string(k) + " is too close to a resonance");
  }
  if (measured.values.size() != points.size()) {
    throw InversionError("step3", "measurement and screen sizes differ");
  }
  std::vector<Point2> core(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    core[i] = transform(pose, {points[i].xp, points[i].zp});
    if (!(core[i].x > 0.0)) {
      throw InversionError("step3", "screen point maps below the estimated core line");
    }
  }
  const Point2 source{pose.x0, 0.0};
  const auto phi = phi_sum_many(core, source, k, n_cl, nbar, quad, 0.0);

  LinearizedEstimate est;
  est.k = k;
  est.phi_min = std::numeric_limits<double>::infinity();
  Complex weighted{};
  double abs_sum = 0.0;
  double length = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double mag = std::abs(phi[i]);
    est.phi_min = std::min(est.phi_min, mag);
    if (mag < 1e-8) {
      throw InversionError("step3", "|Phi_s + Phi_a| below 1e-8 at screen sample " + std::to_string(i));
    }
    const Complex two_ha = 2.0 * H_images(core[i].x, core[i].z, source.x, source.z, k, n_cl).H_a;
    const Complex ratio = (measured.values[i] - two_ha) / phi[i];
    weighted += points[i].w * ratio;
    abs_sum += points[i].w * std::abs(ratio);
    length += points[i].w;
  }
  est.h = std::abs(weighted) / length;
  est.coherence = abs_sum > 0.0 ? std::abs(weighted) / abs_sum : 0.0;
  return est;
}

double calibrate_C(std::span<const std::pair<double, double>> runs) {
  if (runs.size() < 2) throw std::invalid_argument("calibrate_C: need at least two runs");
  double hh = 0.0;
  double hd = 0.0;
  bool distinct = false;
  for (const auto& [h, delta] : runs) {
    hh += h * h;
    hd += h * delta;
    distinct = distinct || h != runs.front().first;
  }
  if (!distinct || !(hh > 0.0)) throw std::invalid_argument("calibrate_C: all runs share one h");
  return hd / hh;
}

PeakLawFit fit_peak_law(std::span<const std::tuple<int, double, double>> samples) {
  if (samples.size() < 2) throw std::invalid_argument("fit_peak_law: need at least two samples");
  double xx = 0.0;
  double xy = 0.0;
  double mean = 0.0;
  for (const auto& [p, h, delta] : samples) {
    const double x = h / p;
    xx += x * x;
    xy += x * delta;
    mean += delta;
  }
  if (!(xx > 0.0)) throw std::invalid_argument("fit_peak_law: degenerate design");
  mean /= static_cast<double>(samples.size());
  PeakLawFit fit;
  fit.C = xy / xx;
  fit.samples = samples.size();
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (const auto& [p, h, delta] : samples) {
    const double r = delta - fit.C * h / p;
    ss_res += r * r;
    ss_tot += (delta - mean) * (delta - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return fit;
}

InversionReport run_pipeline(MeasurementSource& inner, const PipelineConfig& config) {
  CountingSource source(inner);
  InversionReport report;
  report.config = config;
  const auto fail = [&](const std::string& stage, const std::exception& e) {
    const auto* staged = dynamic_cast<const InversionError*>(&e);
    report.failures.push_back({stage, staged ? e.what() : stage + ": " + e.what()});
  };

  try {
    report.scan = step1_scan(source, config.step1);
    report.khat1 = report.scan->khat1();
    report.nbar_hat = report.scan->nbar_hat();
  } catch (const std::exception& e) {
    fail("step1", e);
  }

  if (report.scan) {
    auto& scan = *report.scan;
    try {
      sample_peak_windows(source, scan, config.widths);
      for (int p = 1; p <= static_cast<int>(scan.peaks.size()); ++p) {
        report.widths.push_back(step3_peak_width(scan, config.widths.beta, p));
      }
      if (!(config.C > 0.0)) throw InversionError("step3", "calibration constant C must be positive");
      report.h_hat_peak = report.widths.front().delta / config.C;
      if (*report.h_hat_peak > 0.0) report.nh_hat = *report.nbar_hat / *report.h_hat_peak;
    } catch (const std::exception& e) {
      fail("step3_peak", e);
    }

    try {
      std::vector<double> deltas;
      for (const auto& w : report.widths) deltas.push_back(w.delta);
      report.pose_fit = step2_fit_pose(source, *report.khat1, scan.peaks, deltas, config.step2);
      report.x0_hat = report.pose_fit->pose.x0;
      report.alpha_hat = report.pose_fit->pose.alpha;
    } catch (const std::exception& e) {
      fail("step2", e);
    }

    if (report.pose_fit) {
      try {
        const auto measured = source.acquire(config.h_lin_factor * *report.khat1);
        report.linearized = step3_h_linearized(measured, source.points(), report.pose_fit->pose,
                                               *report.nbar_hat, source.n_cl(), config.nonres_eps,
                                               config.quadrature);
        report.h_hat_lin = report.linearized->h;
        if (report.linearized->h > 0.0) report.nh_hat_lin = *report.nbar_hat / report.linearized->h;
      } catch (const std::exception& e) {
        fail("step3_linearized", e);
      }
    }
  }
  report.acquisitions = source.count();

  if (const auto truth = source.provenance()) {
    const double nbar = truth->params.nbar;
    const double h = truth->params.h;
    const double k1 = kPi / (2.0 * nbar);
    const auto put = [&](const char* key, const std::optional<double>& est, double value) {
      if (est) report.errors_rel[key] = rel_error(*est, value);
    };
    put("khat1", report.khat1, k1);
    put("nbar_hat", report.nbar_hat, nbar);
    put("x0_hat", report.x0_hat, truth->pose.x0);
    put("alpha_hat", report.alpha_hat, truth->pose.alpha);
    put("h_hat_lin", report.h_hat_lin, h);
    put("h_hat_peak", report.h_hat_peak, h);
    put("nh_hat", report.nh_hat, truth->params.n_h());
    put("nh_hat_lin", report.nh_hat_lin, truth->params.n_h());
  }
  return report;
}

InversionReport run_pipeline(const MeasurementSet& data, const PipelineConfig& config) {
  const double dk = (config.step1.k_max - config.step1.k_min) / config.step1.coarse_steps;
  DatasetSource source(data, 0.5 * dk);
  return run_pipeline(source, config);
}

std::string report_to_json(const InversionReport& report, int indent) {
  using nlohmann::json;
  const auto opt = [](const std::optional<double>& v) -> json { return v ? json(*v) : json(nullptr); };
  json j;
  j["khat1"] = opt(report.khat1);
  j["nbar_hat"] = opt(report.nbar_hat);
  j["x0_hat"] = opt(report.x0_hat);
  j["alpha_hat"] = opt(report.alpha_hat);
  j["h_hat_lin"] = opt(report.h_hat_lin);
  j["h_hat_peak"] = opt(report.h_hat_peak);
  j["nh_hat"] = opt(report.nh_hat);
  j["errors_rel"] = json::object();
  for (const auto& [key, value] : report.errors_rel) j["errors_rel"][key] = value;

  json diag;
  diag["nh_hat_lin"] = opt(report.nh_hat_lin);
  diag["acquisitions"] = report.acquisitions;
  diag["failures"] = json::array();
  for (const auto& f : report.failures) diag["failures"].push_back({{"stage", f.stage}, {"message", f.message}});

  json step1 = nullptr;
  if (report.scan) {
    const auto& scan = *report.scan;
    step1 = {{"threshold", scan.threshold},
             {"coarse_points", scan.k.size()},
             {"samples", scan.samples.size()},
             {"hint_consistent", scan.hint_consistent ? json(*scan.hint_consistent) : json(nullptr)}};
    json peaks = json::array();
    for (std::size_t i = 0; i < scan.peaks.size(); ++i) {
      const auto& p = scan.peaks[i];
      json row = {{"p", p.p}, {"k_coarse", p.k_coarse}, {"k_hat", p.k_hat}, {"e_min", p.e_min}};
      if (i < report.widths.size()) {
        row["delta"] = report.widths[i].delta;
        row["b_samples"] = report.widths[i].b_samples;
        row["degenerate"] = report.widths[i].degenerate;
      }
      peaks.push_back(row);
    }
    step1["peaks"] = peaks;
  }
  diag["step1"] = step1;

  json step2 = nullptr;
  if (report.pose_fit) {
    const auto& f = *report.pose_fit;
    step2 = {{"x0_init", f.initial.x0},         {"alpha_init", f.initial.alpha},
             {"objective_init", f.initial_objective}, {"objective", f.objective},
             {"iterations", f.iterations},       {"converged", f.converged},
             {"frequencies", f.frequencies}};
  }
  diag["step2"] = step2;

  json lin = nullptr;
  if (report.linearized) {
    lin = {{"k", report.linearized->k},
           {"phi_min", report.linearized->phi_min},
           {"coherence", report.linearized->coherence}};
  }
  diag["step3_linearized"] = lin;

  const auto& c = report.config;
  diag["config"] = {{"k_min", c.step1.k_min},
                    {"k_max", c.step1.k_max},
                    {"coarse_steps", c.step1.coarse_steps},
                    {"refine_factor", c.step1.refine_factor},
                    {"refine_halfwidth", c.step1.refine_halfwidth},
                    {"prominence", c.step1.prominence},
                    {"beta", c.widths.beta},
                    {"window_points", c.widths.window_points},
                    {"min_b_samples", c.widths.min_b_samples},
                    {"k_factors", c.step2.k_factors},
                    {"h_lin_factor", c.h_lin_factor},
                    {"nonres_eps", c.nonres_eps},
                    {"C", c.C},
                    {"quadrature_tolerance", c.quadrature.tolerance}};
  j["diagnostics"] = diag;
  return j.dump(indent);
}

}  // namespace thinwg
