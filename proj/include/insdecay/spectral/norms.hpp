#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include "insdecay/spectral/field.hpp"
#include "insdecay/spectral/operators.hpp"

namespace insdecay {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline void require_lebesgue_exponent(double p, const char* where) {
  if (!(p >= 1.0)) throw DomainError(std::string(where) + ": L^p exponent must be >= 1");
}

/// ||f||_{L^p} of nodal samples by the rectangle rule with cell weight (l/n)^2.
inline double lp_norm(std::span<const double> nodal, const Grid& g, double p) {
  require_lebesgue_exponent(p, "lp_norm");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : nodal) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  if (p == 2.0) {
    for (double v : nodal) s += v * v;
    return std::sqrt(s * g.cell_area());
  }
  for (double v : nodal) s += std::pow(std::abs(v), p);
  return std::pow(s * g.cell_area(), 1.0 / p);
}

inline double lp_norm(const SpectralField& f, double p) {
  return lp_norm(to_physical(f), f.grid(), p);
}

/// L^p norm of the pointwise Euclidean length of a vector field.
inline double lp_norm(const SpectralVector& v, double p) {
  require_lebesgue_exponent(p, "lp_norm");
  auto [a, b] = to_physical(v);
  NodalField mag(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) mag[i] = std::hypot(a[i], b[i]);
  return lp_norm(mag, v.grid(), p);
}

inline double lp_norm(const VelocityField& u, double p) { return lp_norm(u.vec(), p); }

/// ||f||_{L^2} from the coefficients (Parseval): l sqrt(sum |c_k|^2).
inline double l2_norm(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs()) s += std::norm(c);
  return f.grid().l() * std::sqrt(s);
}

inline double l2_norm(const SpectralVector& v) {
  return std::hypot(l2_norm(v.x), l2_norm(v.y));
}
inline double l2_norm(const VelocityField& u) { return l2_norm(u.vec()); }

/// ||grad u||_{L^2} summed over components, spectrally.
inline double l2_norm_gradient(const SpectralVector& v) {
  const Grid& g = v.grid();
  double s = 0.0;
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.n(); ++ix) {
      s += g.k_squared(ix, iy) * (std::norm(v.x(ix, iy)) + std::norm(v.y(ix, iy)));
    }
  }
  return g.l() * std::sqrt(s);
}
inline double l2_norm_gradient(const VelocityField& u) { return l2_norm_gradient(u.vec()); }

/// ||f||_{H^s} with multiplier (1 + |k|^2)^{s/2}.
inline double sobolev_norm(const SpectralField& f, double s) {
  const Grid& g = f.grid();
  double acc = 0.0;
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.n(); ++ix) {
      acc += std::pow(1.0 + g.k_squared(ix, iy), s) * std::norm(f(ix, iy));
    }
  }
  return g.l() * std::sqrt(acc);
}

inline double sobolev_norm(const SpectralVector& v, double s) {
  return std::hypot(sobolev_norm(v.x, s), sobolev_norm(v.y, s));
}
inline double sobolev_norm(const VelocityField& u, double s) { return sobolev_norm(u.vec(), s); }

/// Unitary Fourier transform samples: u_hat(xi_k) = l^2 c_k / (2 pi), so that
/// sum_k |u_hat(xi_k)|^2 (2 pi / l)^2 = ||u||_{L^2}^2.
inline double unitary_scale(const Grid& g) { return g.area() / (2.0 * std::numbers::pi); }

/// ||u_hat||_{L^q(dxi)} of a vector field with lattice cell (2 pi / l)^2.
inline double fourier_lq_norm(const SpectralVector& v, double q) {
  require_lebesgue_exponent(q, "fourier_lq_norm");
  const Grid& g = v.grid();
  const double scale = unitary_scale(g);
  const double cell = g.k0() * g.k0();
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      m = std::max(m, scale * std::sqrt(std::norm(v.x[i]) + std::norm(v.y[i])));
    }
    return m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    s += std::pow(scale * std::sqrt(std::norm(v.x[i]) + std::norm(v.y[i])), q);
  }
  return std::pow(s * cell, 1.0 / q);
}

/// int_{|xi| <= radius} |u_hat(xi)|^2 dxi, the low-frequency part of ||u||_{L^2}^2.
inline double low_frequency_energy(const SpectralVector& v, double radius) {
  const Grid& g = v.grid();
  const double r2 = radius * radius;
  double s = 0.0;
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.n(); ++ix) {
      if (g.k_squared(ix, iy) <= r2) s += std::norm(v.x(ix, iy)) + std::norm(v.y(ix, iy));
    }
  }
  return g.area() * s;
}

/// ||div v||_{L^2} / ||grad v||_{L^2}; zero for the zero field.
inline double divergence_ratio(const SpectralVector& v) {
  const double gnorm = l2_norm_gradient(v);
  return gnorm > 0.0 ? l2_norm(divergence(v)) / gnorm : 0.0;
}

}  // namespace insdecay
