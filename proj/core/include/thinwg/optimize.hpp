#pragma once

#include <functional>
#include <span>
#include <vector>

namespace thinwg {

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double x_tolerance = 1e-6;  // simplex diameter (max distance to the best vertex)
  double f_tolerance = 1e-10;  // spread of objective values over the simplex
  int max_iterations = 500;
  /// Initial simplex edge per coordinate. Empty selects 5% of each nonzero
  /// coordinate and 0.00025 for zero coordinates.
  std::vector<double> initial_step;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> best_history;  // best objective after each iteration
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex minimisation. Never throws on non-convergence: the
/// result carries converged = false after max_iterations.
NelderMeadResult nelder_mead(const Objective& f, std::span<const double> x_init,
                             const NelderMeadOptions& opts = {});

}  // namespace thinwg
