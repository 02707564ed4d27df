#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "insdecay/harness/initial_data.hpp"
#include "insdecay/solver/integrator.hpp"

namespace insdecay {

/// ||e^{mu0 t Delta} u0||^2_{L^2} evaluated exactly from the coefficients.
inline std::vector<double> heat_baseline(const VelocityField& u0, double mu0,
                                         const std::vector<double>& times) {
  const Grid& g = u0.grid();
  // Group |c_k|^2 by |k|^2 once; the time loop then runs over shells.
  std::vector<std::pair<double, double>> shells;
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.n(); ++ix) {
      const double w = std::norm(u0.u1()(ix, iy)) + std::norm(u0.u2()(ix, iy));
      if (w > 0.0) shells.emplace_back(g.k_squared(ix, iy), w);
    }
  }
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    double s = 0.0;
    for (const auto& [k2, w] : shells) s += std::exp(-2.0 * mu0 * t * k2) * w;
    out.push_back(g.area() * s);
  }
  return out;
}

/// Box validity cutoff t* = l^2 / (8 pi^2 mu0): the time at which heat flow
/// has spread to the lowest box wavenumber.
inline double box_cutoff(double l, double mu0) {
  return l * l / (8.0 * std::numbers::pi * std::numbers::pi * mu0);
}

struct FitWindow {
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// (5 dissipation times of k_c, t* / 2).
inline FitWindow default_window(double mu0, double k_c, double l) {
  FitWindow w{5.0 / (mu0 * k_c * k_c), 0.5 * box_cutoff(l, mu0)};
  if (!(w.t_lo < w.t_hi)) {
    throw DomainError("default fit window is empty: t_lo = " + std::to_string(w.t_lo) +
                      " >= t_hi = " + std::to_string(w.t_hi) + " (box too small for k_c)");
  }
  return w;
}

struct DecayFit {
  double exponent = 0.0;  // -slope of ln(value) against ln(t + e)
  double ci = 0.0;        // 1.96 standard errors
  double intercept = 0.0;
  int samples = 0;
};

/// Least-squares decay exponent on the samples with t in [t_lo, t_hi].
inline DecayFit fit_decay_exponent(const std::vector<double>& t, const std::vector<double>& value,
                                   FitWindow w) {
  if (t.size() != value.size()) throw ShapeMismatch("fit_decay_exponent: length mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < w.t_lo || t[i] > w.t_hi) continue;
    if (!(value[i] > 0.0)) {
      throw DomainError("fit_decay_exponent: nonpositive value at t = " + std::to_string(t[i]));
    }
    x.push_back(std::log(t[i] + std::numbers::e));
    y.push_back(std::log(value[i]));
  }
  const std::size_t n = x.size();
  if (n < 10) {
    throw DomainError("fit_decay_exponent: " + std::to_string(n) +
                      " samples in window, need >= 10");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_decay_exponent: window spans a single time");
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (icpt + slope * x[i]);
    rss += r * r;
  }
  const double se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return {-slope, 1.96 * se, icpt, static_cast<int>(n)};
}

struct DecayReport {
  double p = 0.0;
  double beta_p = 0.0;
  double expected_exponent = 0.0;  // 2 beta(p_eff) of the spectral profile
  DecayFit u;                      // fit of ||u||^2
  DecayFit grad_u;                 // fit of ||grad u||^2
  DecayFit heat;                   // fit of the heat baseline ||e^{t Delta} u0||^2
  FitWindow window;
  double box_cutoff = 0.0;
};

/// Fit ||u||^2 and ||grad u||^2 from diagnostics (and the heat baseline if
/// u0 is given) on a window that must lie inside (0, t*).
inline DecayReport decay_report(const std::vector<Diagnostics>& diag, double p, double expected,
                                FitWindow w, double t_star,
                                const VelocityField* u0 = nullptr, double mu0 = 1.0) {
  if (!(w.t_lo > 0.0 && w.t_hi <= t_star)) {
    throw DomainError("decay_report: fit window must lie inside (0, t*)");
  }
  DecayReport r;
  r.p = p;
  r.beta_p = beta_of(p);
  r.expected_exponent = expected;
  r.window = w;
  r.box_cutoff = t_star;
  std::vector<double> t, eu, eg;
  for (const auto& d : diag) {
    t.push_back(d.t);
    eu.push_back(d.l2_u * d.l2_u);
    eg.push_back(d.l2_grad_u * d.l2_grad_u);
  }
  r.u = fit_decay_exponent(t, eu, w);
  r.grad_u = fit_decay_exponent(t, eg, w);
  if (u0) r.heat = fit_decay_exponent(t, heat_baseline(*u0, mu0, t), w);
  return r;
}

/// n points log-spaced on [a, b].
inline std::vector<double> log_spaced(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a * std::pow(b / a, n > 1 ? i / (n - 1.0) : 0.0);
  return out;
}

}  // namespace insdecay
