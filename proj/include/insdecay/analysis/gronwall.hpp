#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "insdecay/error.hpp"
#include "insdecay/rng.hpp"

namespace insdecay {

/// Right side g(t) + int_0^t h(s) g(s) exp(int_s^t h) ds on the sample grid,
/// with every integral by composite trapezoid.
inline std::vector<double> gronwall_bound(const std::vector<double>& g, const std::vector<double>& h,
                                          const std::vector<double>& t) {
  if (g.size() != t.size() || h.size() != t.size()) {
    throw ShapeMismatch("gronwall_bound: g, h and t must have equal length");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (h[i] < 0.0 || !std::isfinite(h[i])) throw DomainError("gronwall_bound: h must be finite and >= 0");
    if (g[i] < 0.0) throw DomainError("gronwall_bound: g must be >= 0");
    if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("gronwall_bound: t must be increasing");
  }
  const std::size_t n = t.size();
  std::vector<double> H(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) H[i] = H[i - 1] + 0.5 * (h[i] + h[i - 1]) * (t[i] - t[i - 1]);
  // Integrand for fixed t_k is h_i g_i exp(H_k - H_i). Accumulated
  // recursively, so exp(-H) never has to be formed.
  std::vector<double> out(n);
  double acc = 0.0;  // int_0^{t_k} h g exp(H_k - H) ds
  if (n > 0) out[0] = g[0];
  for (std::size_t k = 1; k < n; ++k) {
    const double dH = H[k] - H[k - 1];
    const double dt = t[k] - t[k - 1];
    acc = acc * std::exp(dH) + 0.5 * dt * (h[k - 1] * g[k - 1] * std::exp(dH) + h[k] * g[k]);
    out[k] = g[k] + acc;
  }
  return out;
}

/// max_k (f_k - bound_k); positive when f escapes the bound.
inline double gronwall_violation(const std::vector<double>& f, const std::vector<double>& bound) {
  if (f.size() != bound.size()) throw ShapeMismatch("gronwall_violation: length mismatch");
  double worst = -HUGE_VAL;
  for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, f[i] - bound[i]);
  return worst;
}

/// Extremal f of the integral inequality, f = g + int_0^t h f, obtained from
/// f' = h f + g' by classical RK4 with `substeps` steps per grid interval.
inline std::vector<double> gronwall_ode_oracle(const std::function<double(double)>& h,
                                               const std::function<double(double)>& g,
                                               const std::function<double(double)>& g_prime,
                                               const std::vector<double>& t, int substeps = 64) {
  if (substeps < 1) throw DomainError("gronwall_ode_oracle: substeps must be >= 1");
  std::vector<double> f(t.size());
  if (t.empty()) return f;
  double y = g(t[0]);
  f[0] = y;
  auto rhs = [&](double s, double v) { return h(s) * v + g_prime(s); };
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double dt = (t[i] - t[i - 1]) / substeps;
    double s = t[i - 1];
    for (int k = 0; k < substeps; ++k) {
      const double k1 = rhs(s, y);
      const double k2 = rhs(s + 0.5 * dt, y + 0.5 * dt * k1);
      const double k3 = rhs(s + 0.5 * dt, y + 0.5 * dt * k2);
      const double k4 = rhs(s + dt, y + dt * k3);
      y += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      s += dt;
    }
    f[i] = y;
  }
  return f;
}

/// Random test instance: h continuous and piecewise linear through random
/// nonnegative knots on [0, T], g(t) = a + b sin(w t) + c t with a >= |b|.
struct GronwallInstance {
  double T = 1.0;
  std::vector<double> h_knots;  // values at T i / (size - 1)
  double a = 1.0, b = 0.0, w = 1.0, c = 0.0;

  double h(double s) const {
    const auto pieces = static_cast<double>(h_knots.size() - 1);
    const double x = std::clamp(s / T, 0.0, 1.0) * pieces;
    const auto i = std::min(static_cast<std::size_t>(x), h_knots.size() - 2);
    const double r = x - static_cast<double>(i);
    return (1.0 - r) * h_knots[i] + r * h_knots[i + 1];
  }
  double g(double s) const { return a + b * std::sin(w * s) + c * s; }
  double g_prime(double s) const { return b * w * std::cos(w * s) + c; }

  /// Uniform grid with `per_piece` intervals per piece, so every kink of h
  /// sits on a node.
  std::vector<double> grid(int per_piece) const {
    const std::size_t n = (h_knots.size() - 1) * static_cast<std::size_t>(per_piece);
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i) t[i] = T * static_cast<double>(i) / static_cast<double>(n);
    return t;
  }

  static GronwallInstance random(std::uint64_t seed, std::uint64_t index) {
    const CounterRng rng(seed, "gronwall");
    const std::uint64_t base = index * 32;
    GronwallInstance in;
    in.T = rng.uniform(base, 0.5, 4.0);
    const int pieces = 1 + static_cast<int>(rng.uniform(base + 1) * 8.0);
    for (int i = 0; i <= pieces; ++i) in.h_knots.push_back(rng.uniform(base + 2 + i, 0.0, 2.0));
    in.a = rng.uniform(base + 12, 0.1, 2.0);
    in.b = rng.uniform(base + 13, -1.0, 1.0) * in.a;
    in.w = rng.uniform(base + 14, 0.0, 6.0);
    in.c = rng.uniform(base + 15, 0.0, 1.0);
    return in;
  }
};

/// Trapezoid error allowance for gronwall_check at the default resolution.
inline constexpr double kGronwallQuadratureTol = 1e-5;

struct GronwallCheck {
  double violation = 0.0;  // max_k (oracle_k - bound_k) / max(1, bound_k)
  double bound_end = 0.0;
  double oracle_end = 0.0;
  std::size_t samples = 0;
};

/// Trapezoid bound from grid samples against the RK4 oracle. The two agree in
/// the limit, so the violation measures quadrature error only.
inline GronwallCheck gronwall_check(const GronwallInstance& in, int per_piece = 1000) {
  const auto t = in.grid(per_piece);
  std::vector<double> g(t.size()), h(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    g[i] = in.g(t[i]);
    h[i] = in.h(t[i]);
  }
  const auto bound = gronwall_bound(g, h, t);
  const auto f = gronwall_ode_oracle([&](double s) { return in.h(s); },
                                     [&](double s) { return in.g(s); },
                                     [&](double s) { return in.g_prime(s); }, t, 8);
  GronwallCheck c;
  c.violation = -HUGE_VAL;
  for (std::size_t i = 0; i < t.size(); ++i) {
    c.violation = std::max(c.violation, (f[i] - bound[i]) / std::max(1.0, bound[i]));
  }
  c.bound_end = bound.back();
  c.oracle_end = f.back();
  c.samples = t.size();
  return c;
}

}  // namespace insdecay
