#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace thinwg::app {
namespace {

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw SchemaError("config: " + key + " = '" + text + "' is not a number");
  return v;
}

template <class Int>
Int to_int(const std::string& key, const std::string& text) {
  Int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw SchemaError("config: " + key + " = '" + text + "' is not an integer");
  return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw SchemaError("config: " + key + " has an empty list entry");
    out.push_back(to_double(key, item.substr(b, e - b + 1)));
  }
  return out;
}

std::string list_text(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + format_number(values[i]);
  return out;
}

struct Field {
  const char* section;
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

#define THINWG_REAL(sec, name, member)                                                       \
  Field {                                                                                    \
    sec, name, [](const RunConfig& c) { return format_number(c.member); },                   \
        [](RunConfig& c, const std::string& v) { c.member = to_double(sec "." name, v); }    \
  }
#define THINWG_INT(sec, name, member)                                                                    \
  Field {                                                                                                \
    sec, name, [](const RunConfig& c) { return std::to_string(c.member); },                              \
        [](RunConfig& c, const std::string& v) { c.member = to_int<decltype(c.member)>(sec "." name, v); } \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      THINWG_REAL("waveguide", "h", waveguide.h),
      THINWG_REAL("waveguide", "nbar", waveguide.nbar),
      THINWG_REAL("waveguide", "n_cl", waveguide.n_cl),
      THINWG_REAL("pose", "x0", pose.x0),
      THINWG_REAL("pose", "alpha", pose.alpha),
      THINWG_REAL("screen", "a1", screen.a1),
      THINWG_REAL("screen", "b1", screen.b1),
      THINWG_REAL("screen", "a2", screen.a2),
      THINWG_REAL("screen", "b2", screen.b2),
      THINWG_REAL("screen", "z1", screen.z1),
      THINWG_REAL("screen", "z2", screen.z2),
      THINWG_INT("screen", "samples", screen.samples),
      Field{"screen", "frame",
            [](const RunConfig& c) {
              return std::string(c.screen.frame == ScreenFrame::Core ? "core" : "source_centred");
            },
            [](RunConfig& c, const std::string& v) {
              if (v == "core") {
                c.screen.frame = ScreenFrame::Core;
              } else if (v == "source_centred") {
                c.screen.frame = ScreenFrame::SourceCentredCore;
              } else {
                throw SchemaError("config: screen.frame must be 'source_centred' or 'core'");
              }
            }},
      THINWG_REAL("sweep", "k_min", pipeline.step1.k_min),
      THINWG_REAL("sweep", "k_max", pipeline.step1.k_max),
      THINWG_INT("sweep", "coarse_steps", pipeline.step1.coarse_steps),
      THINWG_INT("sweep", "refine_factor", pipeline.step1.refine_factor),
      THINWG_REAL("sweep", "refine_halfwidth", pipeline.step1.refine_halfwidth),
      THINWG_REAL("sweep", "prominence", pipeline.step1.prominence),
      THINWG_INT("sweep", "max_peaks", pipeline.step1.max_peaks),
      THINWG_REAL("peaks", "beta", pipeline.widths.beta),
      THINWG_INT("peaks", "window_points", pipeline.widths.window_points),
      THINWG_INT("peaks", "min_b_samples", pipeline.widths.min_b_samples),
      THINWG_INT("peaks", "max_refinements", pipeline.widths.max_refinements),
      THINWG_REAL("peaks", "C", pipeline.C),
      Field{"pose_fit", "k_factors", [](const RunConfig& c) { return list_text(c.pipeline.step2.k_factors); },
            [](RunConfig& c, const std::string& v) { c.pipeline.step2.k_factors = to_list("pose_fit.k_factors", v); }},
      THINWG_REAL("pose_fit", "x0_scan_min", pipeline.step2.x0_scan_min),
      THINWG_REAL("pose_fit", "x0_scan_max", pipeline.step2.x0_scan_max),
      THINWG_INT("pose_fit", "x0_scan_points", pipeline.step2.x0_scan_points),
      THINWG_REAL("pose_fit", "x_tolerance", pipeline.step2.nelder_mead.x_tolerance),
      THINWG_REAL("pose_fit", "f_tolerance", pipeline.step2.nelder_mead.f_tolerance),
      THINWG_INT("pose_fit", "max_iterations", pipeline.step2.nelder_mead.max_iterations),
      THINWG_REAL("thickness", "k_factor", pipeline.h_lin_factor),
      THINWG_REAL("thickness", "nonres_eps", pipeline.nonres_eps),
      THINWG_REAL("noise", "percent", noise_percent),
      THINWG_INT("noise", "seed", seed),
      Field{"noise", "scale",
            [](const RunConfig& c) {
              return std::string(c.noise_scale == NoiseScale::ScreenWide ? "screen_wide" : "per_component");
            },
            [](RunConfig& c, const std::string& v) {
              if (v == "screen_wide") {
                c.noise_scale = NoiseScale::ScreenWide;
              } else if (v == "per_component") {
                c.noise_scale = NoiseScale::PerComponent;
              } else {
                throw SchemaError("config: noise.scale must be 'per_component' or 'screen_wide'");
              }
            }},
      THINWG_REAL("quadrature", "tolerance", pipeline.quadrature.tolerance),
      THINWG_REAL("quadrature", "tau_refine_step", pipeline.quadrature.tau_refine_step),
      THINWG_INT("quadrature", "max_depth", pipeline.quadrature.max_depth),
      THINWG_INT("quadrature", "max_panels", pipeline.quadrature.max_panels),
      Field{"output", "dir", [](const RunConfig& c) { return c.out_dir.string(); },
            [](RunConfig& c, const std::string& v) { c.out_dir = v; }},
  };
  return table;
}

#undef THINWG_REAL
#undef THINWG_INT

}  // namespace

Screen ScreenSpec::build() const {
  auto screen = Screen::two_segment(a1, b1, a2, b2, z1, z2, samples);
  screen.frame = frame;
  return screen;
}

void RunConfig::validate() const {
  const auto wrap = [](const char* what, const auto& check) {
    try {
      check();
    } catch (const std::exception& e) {
      throw SchemaError(std::string("config: ") + what + ": " + e.what());
    }
  };
  wrap("waveguide", [&] { waveguide.validate(); });
  wrap("pose", [&] { pose.validate(); });
  wrap("screen", [&] { screen.build().validate(); });
  const auto& s1 = pipeline.step1;
  if (!(s1.k_min > 0.0) || !(s1.k_max > s1.k_min)) throw SchemaError("config: sweep needs 0 < k_min < k_max");
  if (s1.coarse_steps < 2) throw SchemaError("config: sweep.coarse_steps must be >= 2");
  if (s1.refine_factor < 1) throw SchemaError("config: sweep.refine_factor must be >= 1");
  if (!(s1.refine_halfwidth > 0.0 && s1.refine_halfwidth < 0.5)) {
    throw SchemaError("config: sweep.refine_halfwidth must lie in (0, 0.5)");
  }
  if (!(s1.prominence > 0.0)) throw SchemaError("config: sweep.prominence must be positive");
  if (s1.max_peaks < 1) throw SchemaError("config: sweep.max_peaks must be >= 1");
  const auto& w = pipeline.widths;
  if (!(w.beta >= 0.0 && w.beta <= 1.0)) throw SchemaError("config: peaks.beta must lie in [0, 1]");
  if (w.window_points < 2) throw SchemaError("config: peaks.window_points must be >= 2");
  if (!(pipeline.C > 0.0)) throw SchemaError("config: peaks.C must be positive");
  if (pipeline.step2.k_factors.empty()) throw SchemaError("config: pose_fit.k_factors is empty");
  for (const double f : pipeline.step2.k_factors) {
    if (!(f > 0.0)) throw SchemaError("config: pose_fit.k_factors must be positive");
  }
  if (!(pipeline.step2.x0_scan_min > 0.0) || !(pipeline.step2.x0_scan_max > pipeline.step2.x0_scan_min)) {
    throw SchemaError("config: pose_fit needs 0 < x0_scan_min < x0_scan_max");
  }
  if (pipeline.step2.x0_scan_points < 2) throw SchemaError("config: pose_fit.x0_scan_points must be >= 2");
  if (!(pipeline.h_lin_factor > 0.0)) throw SchemaError("config: thickness.k_factor must be positive");
  if (!(pipeline.nonres_eps >= 0.0 && pipeline.nonres_eps < 1.0)) {
    throw SchemaError("config: thickness.nonres_eps must lie in [0, 1)");
  }
  if (!(noise_percent >= 0.0)) throw SchemaError("config: noise.percent must be >= 0");
  if (!(pipeline.quadrature.tolerance > 0.0)) throw SchemaError("config: quadrature.tolerance must be positive");
  if (!(pipeline.quadrature.tau_refine_step > 0.0)) {
    throw SchemaError("config: quadrature.tau_refine_step must be positive");
  }
}

RunConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw SchemaError(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  RunConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw SchemaError("config: key '" + section + "' is outside any section");
    }
    for (const auto& [key, value] : body) {
      const auto& table = fields();
      const auto it = std::find_if(table.begin(), table.end(),
                                   [&](const Field& f) { return section == f.section && key == f.key; });
      if (it == table.end()) throw SchemaError("config: unknown key " + section + "." + key);
      it->set(config, value.data());
    }
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  return parse_config(in);
}

std::string to_ini(const RunConfig& config) {
  std::string out;
  std::string current;
  for (const auto& f : fields()) {
    if (current != f.section) {
      out += (current.empty() ? "[" : "\n[") + std::string(f.section) + "]\n";
      current = f.section;
    }
    out += std::string(f.key) + " = " + f.get(config) + "\n";
  }
  return out;
}

}  // namespace thinwg::app
