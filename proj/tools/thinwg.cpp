#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "selftest.hpp"
#include "thinwg/homogeneous.hpp"
#include "thinwg/inversion.hpp"
#include "thinwg/parallel.hpp"
#include "thinwg/synth.hpp"
#include "thinwg/waveguide.hpp"

namespace fs = std::filesystem;
using namespace thinwg;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kStageFailure = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;
constexpr int kData = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
  std::optional<fs::path> out;
  std::optional<double> kmin;
  std::optional<double> kmax;
  std::optional<int> ksteps;
  bool quiet = false;

  app::RunConfig resolve() const {
    app::RunConfig c = config ? app::load_config(*config) : app::RunConfig{};
    if (seed) c.seed = *seed;
    if (noise) c.noise_percent = *noise;
    if (out) c.out_dir = *out;
    if (kmin) c.pipeline.step1.k_min = *kmin;
    if (kmax) c.pipeline.step1.k_max = *kmax;
    if (ksteps) c.pipeline.step1.coarse_steps = *ksteps;
    if (!(c.pipeline.step1.k_max > c.pipeline.step1.k_min)) {
      throw UsageError("empty frequency range: k_min = " + format_number(c.pipeline.step1.k_min) +
                       ", k_max = " + format_number(c.pipeline.step1.k_max));
    }
    c.validate();
    return c;
  }
};

fs::path output_file(const app::RunConfig& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  return c.out_dir / name;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

SyntheticSource synthetic(const app::RunConfig& c) {
  return SyntheticSource(c.waveguide, c.pose, c.screen.build(), c.noise_percent / 100.0, c.seed, c.noise_scale,
                         c.pipeline.quadrature);
}

// ------------------------------------------------------------------ green

struct GridSpec {
  double xmin = 0.1;
  double xmax = 2.0;
  int nx = 20;
  double zmin = -3.0;
  double zmax = 3.0;
  int nz = 30;
  double k = 2.5;
  int order = 0;
  std::string file = "green.csv";
};

int cmd_green(const Globals& g, const GridSpec& grid) {
  const auto c = g.resolve();
  if (grid.nx < 1 || grid.nz < 1) throw UsageError("grid needs nx, nz >= 1");
  const Point2 source{c.pose.x0, 0.0};
  const auto axis = [](double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };
  std::vector<double> zs;
  for (int j = 0; j < grid.nz; ++j) {
    const double z = axis(grid.zmin, grid.zmax, grid.nz, j);
    if (z == source.z) {
      throw GeometryError("grid row z = " + format_number(z) +
                          " passes through the source; shift the z range so no row has z = 0");
    }
    zs.push_back(z);
  }
  std::vector<std::vector<std::array<double, 6>>> rows(zs.size());
  parallel_for(zs.size(), [&](std::size_t j) {
    std::vector<Point2> pts;
    for (int i = 0; i < grid.nx; ++i) pts.push_back({axis(grid.xmin, grid.xmax, grid.nx, i), zs[j]});
    const auto exact = green_total_many(pts, source, c.waveguide, grid.k, c.pipeline.quadrature);
    const auto approx = asymptotic_G_many(pts, source, grid.k, c.waveguide, grid.order, c.pipeline.quadrature);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Complex v = exact[i].total;
      rows[j].push_back({pts[i].x, pts[i].z, v.real(), v.imag(), std::abs(v), std::abs(v - approx[i])});
    }
  });
  const auto path = output_file(c, grid.file);
  auto out = open_out(path);
  out << "x,z,re_G,im_G,abs_G,abs_err\n";
  for (const auto& row : rows) {
    for (const auto& r : row) {
      for (std::size_t m = 0; m < r.size(); ++m) out << (m ? "," : "") << format_number(r[m]);
      out << '\n';
    }
  }
  if (!g.quiet) std::cerr << "wrote " << path.string() << '\n';
  return kOk;
}

// ------------------------------------------------------------------ scan

int write_scan(const app::RunConfig& c, const ResonanceScan& scan, const std::string& file, bool quiet) {
  std::map<double, double> deriv;
  for (std::size_t j = 0; j < scan.deriv.size(); ++j) deriv[scan.k[j]] = scan.deriv[j];
  std::vector<std::pair<double, double>> windows;  // (lo, hi) with threshold below
  std::vector<double> bars;
  const double k1 = scan.khat1();
  for (const auto& p : scan.peaks) {
    const double lo = p.k_hat - 0.5 * k1;
    const double hi = p.k_hat + 0.5 * k1;
    double mn = INFINITY;
    double mx = -INFINITY;
    for (auto it = scan.samples.lower_bound(lo); it != scan.samples.end() && it->first <= hi; ++it) {
      mn = std::min(mn, it->second);
      mx = std::max(mx, it->second);
    }
    windows.emplace_back(lo, hi);
    bars.push_back(mn + c.pipeline.widths.beta * (mx - mn));
  }
  const auto path = output_file(c, file);
  auto out = open_out(path);
  out << "k,E,deriv_norm,in_B\n";
  for (const auto& [k, e] : scan.samples) {
    bool in_b = false;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      in_b = in_b || (k >= windows[w].first && k <= windows[w].second && e <= bars[w]);
    }
    const auto d = deriv.find(k);
    out << format_number(k) << ',' << format_number(e) << ',' << (d == deriv.end() ? "" : format_number(d->second))
        << ',' << (in_b ? 1 : 0) << '\n';
  }
  if (!quiet) {
    std::cerr << "wrote " << path.string() << '\n';
    for (std::size_t i = 0; i < scan.peaks.size(); ++i) {
      const auto w = step3_peak_width(scan, c.pipeline.widths.beta, static_cast<int>(i) + 1);
      std::printf("peak %d: k_hat = %s, delta = %s\n", scan.peaks[i].p, format_number(scan.peaks[i].k_hat).c_str(),
                  format_number(w.delta).c_str());
    }
  }
  return kOk;
}

int cmd_scan(const Globals& g, const std::optional<fs::path>& data, const std::string& file) {
  const auto c = g.resolve();
  ResonanceScan scan;
  if (data) {
    const double dk = (c.pipeline.step1.k_max - c.pipeline.step1.k_min) / c.pipeline.step1.coarse_steps;
    DatasetSource source(load(*data), 0.5 * dk);
    scan = step1_scan(source, c.pipeline.step1);
    sample_peak_windows(source, scan, c.pipeline.widths);
  } else {
    auto source = synthetic(c);
    scan = step1_scan(source, c.pipeline.step1);
    sample_peak_windows(source, scan, c.pipeline.widths);
  }
  return write_scan(c, scan, file, g.quiet);
}

// ------------------------------------------------------------------ synth

int cmd_synth(const Globals& g, const std::string& plan, const std::string& file) {
  const auto c = g.resolve();
  const auto path = output_file(c, file);
  MeasurementSet set;
  if (plan == "grid") {
    const auto& s1 = c.pipeline.step1;
    std::vector<double> ks;
    for (int j = 0; j <= s1.coarse_steps; ++j) ks.push_back(s1.k_min + (s1.k_max - s1.k_min) * j / s1.coarse_steps);
    set = simulate(c.waveguide, c.pose, c.screen.build(), ks, c.noise_percent / 100.0, c.seed, c.noise_scale,
                   c.pipeline.quadrature);
  } else {
    auto source = synthetic(c);
    RecordingSource recorder(source);
    const auto report = run_pipeline(recorder, c.pipeline);
    set = recorder.recorded(c.noise_percent / 100.0, c.seed, c.noise_scale);
    for (const auto& f : report.failures) std::cerr << "warning: [" << f.stage << "] " << f.message << '\n';
  }
  save(set, path);
  if (!g.quiet) {
    std::cerr << "wrote " << path.string() << " (" << set.frequencies.size() << " frequencies x " << set.points.size()
              << " points)\n";
  }
  return kOk;
}

// ------------------------------------------------------------------ invert

int cmd_invert(const Globals& g, const fs::path& data, const std::string& file) {
  const auto c = g.resolve();
  if (!fs::exists(data)) throw std::runtime_error("cannot open " + data.string());
  const auto set = load(data);
  const auto report = run_pipeline(set, c.pipeline);
  const auto json = report_to_json(report);
  const auto path = output_file(c, file);
  open_out(path) << json << '\n';
  if (!g.quiet) std::cout << json << '\n';
  for (const auto& f : report.failures) std::cerr << "[" << f.stage << "] " << f.message << '\n';
  return report.ok() ? kOk : kStageFailure;
}

// ------------------------------------------------------------------ calibrate

int cmd_calibrate(const Globals& g, const std::vector<fs::path>& data) {
  const auto c = g.resolve();
  const double dk = (c.pipeline.step1.k_max - c.pipeline.step1.k_min) / c.pipeline.step1.coarse_steps;
  std::vector<std::pair<double, double>> runs;
  for (const auto& path : data) {
    auto set = load(path);
    if (!set.provenance) throw SchemaError(path.string() + ": calibration needs a known h in the sidecar");
    const double h = set.provenance->params.h;
    DatasetSource source(std::move(set), 0.5 * dk);
    auto scan = step1_scan(source, c.pipeline.step1);
    sample_peak_windows(source, scan, c.pipeline.widths);
    const double delta = step3_peak_width(scan, c.pipeline.widths.beta, 1).delta;
    runs.emplace_back(h, delta);
    if (!g.quiet) std::cerr << path.string() << ": h = " << format_number(h) << ", delta_1 = " << format_number(delta) << '\n';
  }
  const double C = calibrate_C(runs);
  std::cout << "{\"C\": " << format_number(C) << ", \"runs\": " << runs.size() << "}\n";
  return kOk;
}

// ------------------------------------------------------------------ selftest

int cmd_selftest(const std::vector<int>& only) {
  const auto results = selftest::run(only, std::cout);
  const auto schema = selftest::report_schema();
  std::cout << "check schema [" << (schema.pass ? "PASS" : "FAIL") << "] " << schema.detail << '\n';
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  return passed == results.size() && schema.pass ? kOk : kStageFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"thinwg: thin-core waveguide Green function, synthetic data and parameter inversion"};
  cli.require_subcommand(1);
  cli.fallthrough();
  Globals g;
  cli.add_option("--config", g.config, "INI configuration file")->check(CLI::ExistingFile);
  cli.add_option("--seed", g.seed, "noise seed");
  cli.add_option("--noise", g.noise, "noise level in percent")->check(CLI::NonNegativeNumber);
  cli.add_option("--out", g.out, "output directory");
  cli.add_option("--kmin", g.kmin, "sweep start");
  cli.add_option("--kmax", g.kmax, "sweep end");
  cli.add_option("--ksteps", g.ksteps, "coarse sweep steps");
  cli.add_flag("--quiet", g.quiet, "suppress progress output");

  GridSpec grid;
  auto* green = cli.add_subcommand("green", "G, its asymptote and their gap on an (x, z) grid, core frame");
  green->add_option("--k", grid.k, "frequency");
  green->add_option("--xmin", grid.xmin);
  green->add_option("--xmax", grid.xmax);
  green->add_option("--nx", grid.nx);
  green->add_option("--zmin", grid.zmin);
  green->add_option("--zmax", grid.zmax);
  green->add_option("--nz", grid.nz);
  green->add_option("--order", grid.order, "asymptote order")->check(CLI::IsMember({0, 1}));
  green->add_option("--file", grid.file, "output file name inside --out");

  std::optional<fs::path> scan_data;
  std::string scan_file = "scan.csv";
  auto* scan = cli.add_subcommand("scan", "resonance sweep E(k) with peak windows");
  scan->add_option("--data", scan_data, "read a stored data set instead of simulating")->check(CLI::ExistingFile);
  scan->add_option("--file", scan_file, "output file name inside --out");

  std::string plan = "adaptive";
  std::string synth_file = "data.csv";
  auto* synth = cli.add_subcommand("synth", "synthetic measurement set");
  synth->add_option("--plan", plan, "adaptive: every frequency the inversion requests; grid: coarse sweep only")
      ->check(CLI::IsMember({"adaptive", "grid"}));
  synth->add_option("--file", synth_file, "output file name inside --out");

  fs::path invert_data;
  std::string report_file = "report.json";
  auto* invert = cli.add_subcommand("invert", "run the inversion on a stored data set");
  invert->add_option("data", invert_data, "data set CSV")->required();
  invert->add_option("--file", report_file, "report file name inside --out");

  std::vector<fs::path> calib_data;
  auto* calibrate = cli.add_subcommand("calibrate", "peak-width constant C from data sets with known h");
  calibrate->add_option("data", calib_data, "data set CSVs")->required()->expected(2, -1);

  std::vector<int> only;
  auto* selftest = cli.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--only", only, "criterion numbers")->delimiter(',');

  auto* config = cli.add_subcommand("config", "print the effective configuration as INI");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*green) return cmd_green(g, grid);
    if (*scan) return cmd_scan(g, scan_data, scan_file);
    if (*synth) return cmd_synth(g, plan, synth_file);
    if (*invert) return cmd_invert(g, invert_data, report_file);
    if (*calibrate) return cmd_calibrate(g, calib_data);
    if (*selftest) return cmd_selftest(only);
    if (*config) {
      std::cout << app::to_ini(g.resolve());
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const SchemaError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const InversionError& e) {
    std::cerr << "[" << e.stage() << "] " << e.what() << '\n';
    return kStageFailure;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kUsage;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}
