#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "thinwg/geometry.hpp"
#include "thinwg/optimize.hpp"
#include "thinwg/quadrature.hpp"
#include "thinwg/synth.hpp"

namespace thinwg {

/// A pipeline stage failed; stage names the step ("step1", "step2", ...).
class InversionError : public std::runtime_error {
 public:
  InversionError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// E(k) = ||G_meas - H(.; 0, 0)|| on the lab screen; needs only n_cl.
double resonance_gap(std::span<const Complex> measured, std::span<const ScreenPoint> points,
                     double k, double n_cl);

struct Step1Options {
  double k_min = 0.25;
  double k_max = 4.5;
  int coarse_steps = 400;
  int refine_factor = 50;
  double refine_halfwidth = 0.03;  // refined search over [(1 - w) k, (1 + w) k]
  double prominence = 5.0;         // threshold = prominence * median derivative norm
  int max_peaks = 4;
  std::optional<double> nbar_hint;
  double hint_tolerance = 0.10;
};

struct Peak {
  int p = 0;
  double k_coarse = 0.0;  // coarse argmax of the derivative norm
  double k_hat = 0.0;     // refined argmin of E
  double e_min = 0.0;
};

struct ResonanceScan {
  std::vector<double> k;      // coarse grid, as delivered by the source
  std::vector<double> e;      // E on the coarse grid
  std::vector<double> deriv;  // deriv[j] = ||G(k[j+1]) - G(k[j])||
  double threshold = 0.0;
  std::vector<Peak> peaks;
  std::map<double, double> samples;  // every evaluated (k, E), coarse and refined
  std::optional<bool> hint_consistent;

  double khat1() const;
  double nbar_hat() const;
};

/// Coarse sweep, detection of derivative-norm peaks above the prominence
/// threshold, and refinement of each peak to the argmin of E. Throws
/// InversionError("step1", ...) when no peak is found.
ResonanceScan step1_scan(MeasurementSource& source, const Step1Options& opts = {});

struct PeakWidthOptions {
  int window_points = 400;
  int min_b_samples = 16;
  int max_refinements = 12;
  double beta = 1.0 / 3.0;
};

/// Adds E samples over each window [k_p - k_1/2, k_p + k_1/2]: a uniform grid,
/// then local refinement around the dip until the set B holds min_b_samples.
void sample_peak_windows(MeasurementSource& source, ResonanceScan& scan,
                         const PeakWidthOptions& opts = {});

struct PeakWidth {
  double delta = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int b_samples = 0;
  bool degenerate = false;  // E constant over the window
};

/// delta_p = 1/2 measure{k in window : E(k) <= min E + beta (max E - min E)},
/// with min and max taken over the window and the indicator integrated with
/// midpoint cells on the scan samples. Throws InversionError("step3", ...)
/// when the samples do not cover the window.
PeakWidth step3_peak_width(const ResonanceScan& scan, double beta, int p);

struct Step2Options {
  std::vector<double> k_factors{2.5, 3.5, 4.5};
  double x0_scan_min = 0.05;
  double x0_scan_max = 10.0;
  int x0_scan_points = 60;
  std::vector<double> initial_step{0.1, 0.05};  // in (log x0, alpha)
  NelderMeadOptions nelder_mead;
};

struct PoseFit {
  Pose pose;
  Pose initial;
  double objective = 0.0;
  double initial_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> frequencies;  // K actually used
  std::vector<double> history;
};

/// Objective of the pose fit: sum over K of ||G_meas - 2 H_a(T(.); x0, 0)||^2.
double pose_objective(std::span<const Acquisition> data, std::span<const ScreenPoint> points,
                      double n_cl, const Pose& pose);

/// Fits (x0, alpha) at the frequencies k_factors * khat1 with Nelder-Mead in
/// (log x0, alpha), starting from the best x0 of a 1D scan at alpha = 0.
/// widths (optional, one per peak) shift K frequencies out of resonant bands.
PoseFit step2_fit_pose(MeasurementSource& source, double khat1, std::span<const Peak> peaks,
                       std::span<const double> widths, const Step2Options& opts = {});

struct LinearizedEstimate {
  double h = 0.0;
  double k = 0.0;
  double phi_min = 0.0;    // min |Phi_s + Phi_a| over the screen
  double coherence = 0.0;  // |sum w r| / sum w |r|, 1 when all ratios agree in phase
};

/// h from the first-order model at one non-resonant frequency. Throws
/// InversionError("step3", ...) if |sin(k nbar)| or |cos(k nbar)| is within
/// nonres_eps of zero, or if |Phi_s + Phi_a| < 1e-8 at some sample.
LinearizedEstimate step3_h_linearized(const Acquisition& measured,
                                      std::span<const ScreenPoint> points, const Pose& pose,
                                      double nbar, double n_cl, double nonres_eps = 0.01,
                                      const QuadratureOptions& quad = {});

/// Least-squares slope through the origin of delta_1 against h.
/// Throws std::invalid_argument with fewer than two distinct h values.
double calibrate_C(std::span<const std::pair<double, double>> runs);

struct PeakLawFit {
  double C = 0.0;
  double r_squared = 0.0;
  std::size_t samples = 0;
};

/// Fits delta = C h / p over (p, h, delta) triples; r_squared about the mean.
PeakLawFit fit_peak_law(std::span<const std::tuple<int, double, double>> samples);

struct PipelineConfig {
  Step1Options step1;
  PeakWidthOptions widths;
  Step2Options step2;
  double h_lin_factor = 2.99;
  double nonres_eps = 0.01;
  double C = 0.11824;
  QuadratureOptions quadrature;
};

struct StageFailure {
  std::string stage;
  std::string message;
};

struct InversionReport {
  std::optional<double> khat1;
  std::optional<double> nbar_hat;
  std::optional<double> x0_hat;
  std::optional<double> alpha_hat;
  std::optional<double> h_hat_lin;
  std::optional<double> h_hat_peak;
  std::optional<double> nh_hat;      // nbar_hat / h_hat_peak
  std::optional<double> nh_hat_lin;  // nbar_hat / h_hat_lin
  std::map<std::string, double> errors_rel;

  std::optional<ResonanceScan> scan;
  std::vector<PeakWidth> widths;
  std::optional<PoseFit> pose_fit;
  std::optional<LinearizedEstimate> linearized;
  std::vector<StageFailure> failures;
  PipelineConfig config;
  std::size_t acquisitions = 0;

  bool ok() const { return failures.empty(); }
};

/// Steps 1 -> 2 -> 3(i) and 3(ii). Stage errors are caught and recorded; a
/// failed Step 1 leaves every downstream estimate empty. Relative errors are
/// filled in when the source knows the ground truth.
InversionReport run_pipeline(MeasurementSource& source, const PipelineConfig& config = {});

/// Same on a stored data set; requests snap to stored frequencies within half a
/// coarse step.
InversionReport run_pipeline(const MeasurementSet& data, const PipelineConfig& config = {});

/// JSON text of a report with the fixed top-level keys khat1, nbar_hat, x0_hat,
/// alpha_hat, h_hat_lin, h_hat_peak, nh_hat, errors_rel, diagnostics.
std::string report_to_json(const InversionReport& report, int indent = 2);

}  // namespace thinwg
