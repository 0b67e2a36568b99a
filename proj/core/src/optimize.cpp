#include "thinwg/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace thinwg {
namespace {

struct Vertex {
  std::vector<double> x;
  double f = 0.0;
};

double diameter(const std::vector<Vertex>& simplex) {
  double d = 0.0;
  for (std::size_t v = 1; v < simplex.size(); ++v) {
    for (std::size_t j = 0; j < simplex[v].x.size(); ++j) {
      d = std::max(d, std::abs(simplex[v].x[j] - simplex[0].x[j]));
    }
  }
  return d;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::span<const double> x_init,
                             const NelderMeadOptions& opts) {
  const std::size_t n = x_init.size();
  if (n == 0) throw std::invalid_argument("nelder_mead: empty starting point");
  if (!opts.initial_step.empty() && opts.initial_step.size() != n) {
    throw std::invalid_argument("nelder_mead: initial_step has the wrong dimension");
  }

  NelderMeadResult result;
  const auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double value = f(x);
    return std::isnan(value) ? HUGE_VAL : value;
  };

  std::vector<Vertex> simplex(n + 1);
  simplex[0].x.assign(x_init.begin(), x_init.end());
  simplex[0].f = eval(simplex[0].x);
  if (!std::isfinite(simplex[0].f)) {
    throw std::invalid_argument("nelder_mead: objective is not finite at the starting point");
  }
  for (std::size_t j = 0; j < n; ++j) {
    auto x = simplex[0].x;
    double step = 0.0;
    if (!opts.initial_step.empty()) {
      step = opts.initial_step[j];
    } else {
      step = (x[j] != 0.0) ? 0.05 * x[j] : 0.00025;
    }
    x[j] += step;
    simplex[j + 1].x = std::move(x);
    simplex[j + 1].f = eval(simplex[j + 1].x);
  }

  const auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::vector<double> centroid(n);
  const auto along = [&](double t) {
    // centroid + t (centroid - worst)
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + t * (centroid[j] - simplex[n].x[j]);
    return x;
  };

  // A simplex with identical finite values has no descent direction: stop at x_init.
  if (std::isfinite(simplex[0].f) &&
      std::all_of(simplex.begin(), simplex.end(), [&](const Vertex& v) { return v.f == simplex[0].f; })) {
    result.x = simplex[0].x;
    result.f = simplex[0].f;
    result.converged = true;
    return result;
  }

  while (true) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    const double spread = simplex[n].f - simplex[0].f;
    if (diameter(simplex) < opts.x_tolerance && spread < opts.f_tolerance) {
      result.converged = true;
      break;
    }
    if (result.iterations >= opts.max_iterations) break;
    ++result.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[v].x[j] / static_cast<double>(n);
    }

    Vertex reflected{along(opts.reflection), 0.0};
    reflected.f = eval(reflected.x);
    if (reflected.f < simplex[0].f) {
      Vertex expanded{along(opts.reflection * opts.expansion), 0.0};
      expanded.f = eval(expanded.x);
      simplex[n] = (expanded.f < reflected.f) ? std::move(expanded) : std::move(reflected);
    } else if (reflected.f < simplex[n - 1].f) {
      simplex[n] = std::move(reflected);
    } else {
      const bool outside = reflected.f < simplex[n].f;
      Vertex contracted{along(outside ? opts.reflection * opts.contraction : -opts.contraction),
                        0.0};
      contracted.f = eval(contracted.x);
      const double bar = outside ? reflected.f : simplex[n].f;
      if (contracted.f <= bar) {
        simplex[n] = std::move(contracted);
      } else {
        for (std::size_t v = 1; v <= n; ++v) {
          for (std::size_t j = 0; j < n; ++j) {
            simplex[v].x[j] = simplex[0].x[j] + opts.shrink * (simplex[v].x[j] - simplex[0].x[j]);
          }
          simplex[v].f = eval(simplex[v].x);
        }
      }
    }
    result.best_history.push_back(
        std::min_element(simplex.begin(), simplex.end(), by_value)->f);
  }

  result.x = simplex[0].x;
  result.f = simplex[0].f;
  return result;
}

}  // namespace thinwg
