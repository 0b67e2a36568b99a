#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "thinwg/geometry.hpp"
#include "thinwg/inversion.hpp"
#include "thinwg/quadrature.hpp"
#include "thinwg/synth.hpp"
#include "thinwg/waveguide.hpp"

namespace thinwg::app {

/// Constants of the two-segment screen.
struct ScreenSpec {
  double a1 = 0.1;
  double b1 = 0.1;
  double a2 = -0.4;
  double b2 = 0.1;
  double z1 = 2.0;
  double z2 = 7.0;
  int samples = 64;
  ScreenFrame frame = ScreenFrame::SourceCentredCore;

  Screen build() const;
};

/// Everything a command needs. Defaults reproduce the reference setup.
struct RunConfig {
  WaveguideParams waveguide;
  Pose pose;
  ScreenSpec screen;
  PipelineConfig pipeline;
  double noise_percent = 3.0;
  std::uint64_t seed = 1;
  NoiseScale noise_scale = NoiseScale::PerComponent;
  std::filesystem::path out_dir = ".";

  /// Throws SchemaError naming the offending key.
  void validate() const;
};

/// INI text: [waveguide] [pose] [screen] [sweep] [peaks] [pose_fit] [thickness]
/// [noise] [quadrature] [output]. Unknown sections or keys are errors; missing
/// keys keep their defaults. Throws SchemaError.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// INI text that parse_config reads back to the same configuration.
std::string to_ini(const RunConfig& config);

}  // namespace thinwg::app
