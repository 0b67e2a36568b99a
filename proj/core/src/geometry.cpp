#include "thinwg/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace thinwg {

void Pose::validate() const {
  if (!(x0 > 0.0) || !std::isfinite(x0)) throw GeometryError("Pose: x0 must be positive");
  if (!(std::abs(alpha) < 0.5 * kPi)) throw GeometryError("Pose: |alpha| must be below pi/2");
}

Point2 transform(const Pose& pose, Point2 lab) {
  const double c = std::cos(pose.alpha);
  const double s = std::sin(pose.alpha);
  return {pose.x0 + c * lab.x - s * lab.z, s * lab.x + c * lab.z};
}

Point2 transform_inv(const Pose& pose, Point2 core) {
  const double c = std::cos(pose.alpha);
  const double s = std::sin(pose.alpha);
  const double dx = core.x - pose.x0;
  const double dz = core.z;
  return {c * dx + s * dz, -s * dx + c * dz};
}

double ScreenSegment::length() const {
  return std::abs(z_end - z_begin) * std::sqrt(1.0 + slope * slope);
}

Screen Screen::two_segment(double a1, double b1, double a2, double b2, double z1, double z2,
                           int samples_per_segment) {
  const double zm = 0.5 * (z1 + z2);
  Screen screen;
  screen.segments = {{a1, b1, zm, z1, zm}, {a2, b2, zm, zm, z2}};
  screen.samples_per_segment = samples_per_segment;
  return screen;
}

void Screen::validate() const {
  if (segments.empty()) throw GeometryError("Screen: at least one segment is required");
  for (const auto& seg : segments) {
    if (!std::isfinite(seg.slope) || !std::isfinite(seg.intercept) ||
        !std::isfinite(seg.z_begin) || !std::isfinite(seg.z_end) || !std::isfinite(seg.z_ref)) {
      throw GeometryError("Screen: non-finite segment constant");
    }
    if (!(seg.z_end > seg.z_begin)) throw GeometryError("Screen: segment needs z_end > z_begin");
  }
  if (samples_per_segment < 2) throw GeometryError("Screen: need at least 2 samples per segment");
}

double Screen::total_length() const {
  double total = 0.0;
  for (const auto& seg : segments) total += seg.length();
  return total;
}

std::vector<ScreenSample> sample_screen(const Screen& screen, int n, const Pose& pose) {
  screen.validate();
  pose.validate();
  if (n < 2) throw GeometryError("sample_screen: need at least 2 samples per segment");
  const double x_offset = (screen.frame == ScreenFrame::SourceCentredCore) ? pose.x0 : 0.0;
  std::vector<ScreenSample> samples;
  samples.reserve(screen.segments.size() * static_cast<std::size_t>(n));
  double t_start = 0.0;
  for (const auto& seg : screen.segments) {
    const double dz = (seg.z_end - seg.z_begin) / (n - 1);
    const double stretch = std::sqrt(1.0 + seg.slope * seg.slope);
    for (int i = 0; i < n; ++i) {
      const double z = (i == n - 1) ? seg.z_end : seg.z_begin + i * dz;
      ScreenSample sample;
      sample.t = t_start + (z - seg.z_begin) * stretch;
      sample.core = {x_offset + seg.x_at(z), z};
      sample.lab = transform_inv(pose, sample.core);
      sample.w = dz * stretch * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
      samples.push_back(sample);
    }
    t_start += seg.length();
  }
  return samples;
}

std::vector<ScreenSample> sample_screen(const Screen& screen, const Pose& pose) {
  return sample_screen(screen, screen.samples_per_segment, pose);
}

double screen_norm(std::span<const Complex> values, std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("screen_norm: values and weights differ in length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += weights[i] * std::norm(values[i]);
  return std::sqrt(sum);
}

}  // namespace thinwg
