#include "thinwg/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>

namespace thinwg {
namespace {

// 15-point Kronrod abscissae (positive half) and weights, with the embedded 7-point Gauss weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

enum class Range { Below, Above };  // theta in [0, pi/2] or u in [0, u_max]

struct Panel {
  Range range;
  double a;
  double b;
  int depth;
  double error;
  std::size_t slot;
};

struct PanelOrder {
  const std::vector<Panel>* panels;
  bool operator()(std::size_t lhs, std::size_t rhs) const {
    const auto& l = (*panels)[lhs];
    const auto& r = (*panels)[rhs];
    if (l.error != r.error) return l.error < r.error;
    return lhs > rhs;  // deterministic tie-break
  }
};

class Integrator {
 public:
  Integrator(std::size_t dim, const SpectralIntegrand& f, const SpectralIntegrandContext& ctx)
      : dim_(dim), f_(f), ctx_(ctx), buffer_(dim), kron_(dim), gauss_(dim) {}

  // Integrates one panel into values_[slot]; returns the max-component error.
  double evaluate(Range range, double a, double b, std::size_t slot) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::fill(kron_.begin(), kron_.end(), Complex{});
    std::fill(gauss_.begin(), gauss_.end(), Complex{});
    for (std::size_t j = 0; j < 8; ++j) {
      const int copies = (j == 7) ? 1 : 2;
      for (int c = 0; c < copies; ++c) {
        const double v = (c == 0) ? centre - half * kXgk[j] : centre + half * kXgk[j];
        sample(range, v);
        const double wk = kWgk[j];
        const bool gauss_node = (j % 2 == 1);
        const double wg = gauss_node ? kWg[j / 2] : 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
          kron_[i] += wk * buffer_[i];
          if (gauss_node) gauss_[i] += wg * buffer_[i];
        }
      }
    }
    auto& out = values_[slot];
    out.resize(dim_);
    double err = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      out[i] = half * kron_[i];
      err = std::max(err, std::abs(half * (kron_[i] - gauss_[i])));
    }
    return err;
  }

  SpectralResult run() {
    const double n = ctx_.n_cl;
    const double tau_max = spectral_tail_limit(ctx_);
    const double step = ctx_.tau_refine_step;

    std::vector<std::pair<Range, std::pair<double, double>>> initial;
    const double theta_end = (tau_max < n) ? std::asin(tau_max / n) : 0.5 * kPi;
    {
      // Geometric grading away from tau = 0, then coarse panels, then one
      // panel of tau-width `step` against tau = n_cl.
      std::vector<double> bps{0.0};
      double t = step;
      while (t < 0.2 && t < theta_end) {
        bps.push_back(t);
        t *= 2.0;
      }
      const double top = 0.5 * kPi - std::sqrt(2.0 * step);
      double last = bps.back();
      const double limit = std::min(top, theta_end);
      if (limit > last) {
        const int pieces = std::max(1, static_cast<int>(std::ceil((limit - last) / 0.2)));
        for (int p = 1; p <= pieces; ++p) bps.push_back(last + (limit - last) * p / pieces);
      }
      if (theta_end > bps.back()) bps.push_back(theta_end);
      for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        initial.push_back({Range::Below, {bps[i], bps[i + 1]}});
      }
    }
    if (tau_max > n) {
      const double u_max = std::acosh(tau_max / n);
      std::vector<double> bps{0.0};
      double u = std::sqrt(2.0 * step);
      while (u < u_max) {
        bps.push_back(u);
        u *= 2.0;
      }
      bps.push_back(u_max);
      for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        initial.push_back({Range::Above, {bps[i], bps[i + 1]}});
      }
    }

    panels_.reserve(256);
    values_.reserve(256);
    for (const auto& [range, ab] : initial) {
      values_.emplace_back();
      const std::size_t slot = values_.size() - 1;
      const double err = evaluate(range, ab.first, ab.second, slot);
      panels_.push_back({range, ab.first, ab.second, 0, err, slot});
    }

    PanelOrder order{&panels_};
    std::priority_queue<std::size_t, std::vector<std::size_t>, PanelOrder> heap(order);
    double total = 0.0;
    for (std::size_t i = 0; i < panels_.size(); ++i) {
      heap.push(i);
      total += panels_[i].error;
    }

    std::size_t iteration = 0;
    while (total > ctx_.tolerance && !heap.empty()) {
      const std::size_t worst = heap.top();
      heap.pop();
      const Panel parent = panels_[worst];
      if (parent.depth >= ctx_.max_depth) {
        throw QuadratureError("integrate_spectral: refinement depth cap reached with error " +
                              std::to_string(total) + " > tolerance " +
                              std::to_string(ctx_.tolerance));
      }
      if (panels_.size() >= ctx_.max_panels) {
        throw QuadratureError("integrate_spectral: panel budget exhausted with error " +
                              std::to_string(total));
      }
      const double mid = 0.5 * (parent.a + parent.b);
      const double err_left = evaluate(parent.range, parent.a, mid, parent.slot);
      values_.emplace_back();
      const std::size_t right_slot = values_.size() - 1;
      const double err_right = evaluate(parent.range, mid, parent.b, right_slot);

      panels_[worst] = {parent.range, parent.a, mid, parent.depth + 1, err_left, parent.slot};
      panels_.push_back({parent.range, mid, parent.b, parent.depth + 1, err_right, right_slot});
      heap.push(worst);
      heap.push(panels_.size() - 1);

      total += err_left + err_right - parent.error;
      if (++iteration % 64 == 0) {
        total = 0.0;
        for (const auto& p : panels_) total += p.error;
      }
    }

    // Sum in a fixed order (by range, then position) so the result does not
    // depend on the refinement history.
    std::vector<std::size_t> idx(panels_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [this](std::size_t l, std::size_t r) {
      const auto& pl = panels_[l];
      const auto& pr = panels_[r];
      if (pl.range != pr.range) return pl.range < pr.range;
      return pl.a < pr.a;
    });
    SpectralResult result;
    result.values.assign(dim_, Complex{});
    double err = 0.0;
    for (const auto i : idx) {
      const auto& vals = values_[panels_[i].slot];
      for (std::size_t c = 0; c < dim_; ++c) result.values[c] += vals[c];
      err += panels_[i].error;
    }
    result.error = err;
    result.panels = panels_.size();
    result.evaluations = evaluations_;
    return result;
  }

 private:
  void sample(Range range, double v) {
    const double n = ctx_.n_cl;
    double tau = 0.0;
    Complex root;
    double jacobian = 0.0;
    if (range == Range::Below) {
      tau = n * std::sin(v);
      const double c = n * std::cos(v);
      root = Complex(c, 0.0);
      jacobian = c;
    } else {
      tau = n * std::cosh(v);
      const double s = n * std::sinh(v);
      root = Complex(0.0, s);
      jacobian = s;
    }
    std::fill(buffer_.begin(), buffer_.end(), Complex{});
    f_(tau, root, std::span<Complex>(buffer_));
    for (auto& value : buffer_) value *= jacobian;
    ++evaluations_;
  }

  std::size_t dim_;
  const SpectralIntegrand& f_;
  const SpectralIntegrandContext& ctx_;
  std::vector<Complex> buffer_;
  std::vector<Complex> kron_;
  std::vector<Complex> gauss_;
  std::vector<Panel> panels_;
  std::vector<std::vector<Complex>> values_;
  std::size_t evaluations_ = 0;
};

}  // namespace

Complex sqrt_branch(double n_cl, double tau) {
  if (tau <= n_cl) return {std::sqrt((n_cl - tau) * (n_cl + tau)), 0.0};
  return {0.0, std::sqrt((tau - n_cl) * (tau + n_cl))};
}

double spectral_tail_limit(const SpectralIntegrandContext& ctx) {
  if (ctx.tau_max > 0.0) return ctx.tau_max;
  if (!(ctx.z_dist > 0.0)) {
    throw DomainError("integrate_spectral: |z - z0| must be positive unless tau_max is given");
  }
  const double target = -std::log(ctx.tolerance) + 5.0;
  const double root = target / (ctx.k * ctx.z_dist);  // k sqrt(tau^2 - n^2) |z - z0| >= target
  return std::sqrt(ctx.n_cl * ctx.n_cl + root * root);
}

SpectralResult integrate_spectral(std::size_t dim, const SpectralIntegrand& f,
                                  const SpectralIntegrandContext& ctx) {
  if (!(ctx.tolerance > 0.0)) throw DomainError("integrate_spectral: tolerance must be positive");
  if (!(ctx.tau_refine_step > 0.0)) {
    throw DomainError("integrate_spectral: tau_refine_step must be positive");
  }
  if (!(ctx.k > 0.0) || !(ctx.n_cl > 0.0)) {
    throw DomainError("integrate_spectral: k and n_cl must be positive");
  }
  Integrator integrator(dim, f, ctx);
  return integrator.run();
}

Complex integrate_spectral(const ScalarSpectralIntegrand& f, const SpectralIntegrandContext& ctx) {
  const SpectralIntegrand wrapped = [&f](double tau, Complex root, std::span<Complex> out) {
    out[0] = f(tau, root);
  };
  return integrate_spectral(1, wrapped, ctx).values[0];
}

}  // namespace thinwg
