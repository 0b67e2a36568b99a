#pragma once

#include <span>
#include <vector>

#include "thinwg/common.hpp"

namespace thinwg {

/// Placement of the core relative to the lab frame: the source sits at the lab
/// origin, the core centre line at distance x0 from it, tilted by alpha.
struct Pose {
  double x0 = 1.0;
  double alpha = kPi / 20.0;

  /// Throws GeometryError unless x0 > 0 and |alpha| < pi/2.
  void validate() const;
};

/// Lab frame -> core frame: (x, z) = (x0, 0) + R(alpha) (x', z').
Point2 transform(const Pose& pose, Point2 lab);

/// Core frame -> lab frame; inverse of transform.
Point2 transform_inv(const Pose& pose, Point2 core);

/// Straight screen piece x = slope (z - z_ref) + intercept for z in [z_begin, z_end],
/// in the core frame.
struct ScreenSegment {
  double slope = 0.0;
  double intercept = 0.0;
  double z_ref = 0.0;
  double z_begin = 0.0;
  double z_end = 1.0;

  double x_at(double z) const { return slope * (z - z_ref) + intercept; }
  double length() const;
};

/// Which frame the segment line formulas are written in.
///   SourceCentredCore: core-aligned axes, x measured from the source height x0,
///                      so a core-frame point is (x0 + x_line, z).
///   Core:              the line formulas are core-frame coordinates verbatim.
enum class ScreenFrame { SourceCentredCore, Core };

struct Screen {
  std::vector<ScreenSegment> segments;
  int samples_per_segment = 64;
  ScreenFrame frame = ScreenFrame::SourceCentredCore;

  /// Two segments sharing z_m = (z1 + z2) / 2 with the default constants.
  static Screen two_segment(double a1 = 0.1, double b1 = 0.1, double a2 = -0.4, double b2 = 0.1,
                            double z1 = 2.0, double z2 = 7.0, int samples_per_segment = 64);

  /// Throws GeometryError on an empty or malformed screen.
  void validate() const;
  double total_length() const;
};

struct ScreenSample {
  double t = 0.0;   // arclength from the start of the screen
  Point2 core;      // core-frame position
  Point2 lab;       // lab-frame position
  double w = 0.0;   // trapezoid arclength weight
};

/// Samples every segment uniformly in z with n >= 2 points (endpoints included).
/// Weights are trapezoid weights dz sqrt(1 + slope^2), so they sum to the total length.
std::vector<ScreenSample> sample_screen(const Screen& screen, int n, const Pose& pose);
std::vector<ScreenSample> sample_screen(const Screen& screen, const Pose& pose);

/// sqrt(sum w_i |v_i|^2). Throws std::invalid_argument on length mismatch.
double screen_norm(std::span<const Complex> values, std::span<const double> weights);

}  // namespace thinwg
