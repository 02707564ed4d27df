#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "insdecay/spectral/field.hpp"

namespace insdecay {

/// Apply a real or complex multiplier m(kx, ky) mode by mode.
template <class M>
SpectralField apply_multiplier(const SpectralField& f, M&& m) {
  const Grid& g = f.grid();
  SpectralField out(g);
  const int n = g.n();
  for (int iy = 0; iy < n; ++iy) {
    const double ky = g.wavenumber(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double kx = g.wavenumber(ix);
      out(ix, iy) = m(kx, ky) * f(ix, iy);
    }
  }
  return out;
}

/// Multiplier variant that also receives the storage indices (for Nyquist handling).
template <class M>
SpectralField apply_indexed_multiplier(const SpectralField& f, M&& m) {
  const Grid& g = f.grid();
  SpectralField out(g);
  const int n = g.n();
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) out(ix, iy) = m(ix, iy) * f(ix, iy);
  }
  return out;
}

/// Zero every mode removed by the grid's dealiasing mask.
inline SpectralField dealias(SpectralField f) {
  const Grid& g = f.grid();
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.n(); ++ix) {
      if (!g.keeps(ix, iy)) f(ix, iy) = 0.0;
    }
  }
  return f;
}

inline SpectralVector dealias(SpectralVector v) {
  return SpectralVector(dealias(std::move(v.x)), dealias(std::move(v.y)));
}

/// Derivative along axis (1 = x, 2 = y). Odd multipliers vanish on the
/// Nyquist row/column so that the result stays real.
inline SpectralField derivative(const SpectralField& f, int axis) {
  const Grid& g = f.grid();
  return apply_indexed_multiplier(f, [&](int ix, int iy) {
    const int i = axis == 1 ? ix : iy;
    if (g.is_nyquist(i)) return cplx(0.0, 0.0);
    return cplx(0.0, g.wavenumber(i));
  });
}

/// (d/dx f, d/dy f); component i carries the multiplier i (2 pi / l) k_i.
inline SpectralVector gradient(const SpectralField& f) {
  return SpectralVector(derivative(f, 1), derivative(f, 2));
}

inline SpectralField divergence(const SpectralVector& v) {
  SpectralField d = derivative(v.x, 1);
  d += derivative(v.y, 2);
  return d;
}

/// Scalar curl dv/dx - du/dy.
inline SpectralField curl(const SpectralVector& v) {
  SpectralField c = derivative(v.y, 1);
  c -= derivative(v.x, 2);
  return c;
}

inline SpectralField laplacian(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply_indexed_multiplier(f, [&](int ix, int iy) { return -g.k_squared(ix, iy); });
}

inline SpectralVector laplacian(const SpectralVector& v) {
  return SpectralVector(laplacian(v.x), laplacian(v.y));
}

/// Delta^{-1} with the mean mode mapped to zero.
inline SpectralField inverse_laplacian(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply_indexed_multiplier(f, [&](int ix, int iy) {
    const double k2 = g.k_squared(ix, iy);
    return k2 > 0.0 ? -1.0 / k2 : 0.0;
  });
}

/// Heat semigroup e^{nu t Delta}.
inline SpectralField heat(const SpectralField& f, double nu_t) {
  const Grid& g = f.grid();
  return apply_indexed_multiplier(
      f, [&](int ix, int iy) { return std::exp(-nu_t * g.k_squared(ix, iy)); });
}

inline SpectralVector heat(const SpectralVector& v, double nu_t) {
  return SpectralVector(heat(v.x, nu_t), heat(v.y, nu_t));
}

/// Q v = grad Delta^{-1} div v: the curl-free part. The mean mode is left to P.
inline SpectralVector gradient_part(const SpectralVector& v) {
  const Grid& g = v.grid();
  SpectralVector out(g);
  const int n = g.n();
  for (int iy = 0; iy < n; ++iy) {
    const double ky = g.wavenumber(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double kx = g.wavenumber(ix);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      const cplx a = v.x(ix, iy), b = v.y(ix, iy);
      const cplx kdotv = kx * a + ky * b;
      out.x(ix, iy) = kx * kdotv / k2;
      out.y(ix, iy) = ky * kdotv / k2;
    }
  }
  return out;
}

/// Leray projector P = I - Q onto divergence-free fields. The k = 0 mode
/// passes through unchanged.
inline VelocityField leray_project(const SpectralVector& v) {
  SpectralVector q = gradient_part(v);
  return VelocityField::from_components(v - q);
}

/// Riesz transform along axis i: multiplier i k_i / |k|, zero at k = 0 and on
/// the Nyquist row/column of that axis.
inline SpectralField riesz(const SpectralField& f, int axis) {
  const Grid& g = f.grid();
  return apply_indexed_multiplier(f, [&](int ix, int iy) {
    const int i = axis == 1 ? ix : iy;
    const double k = g.k_norm(ix, iy);
    if (k == 0.0 || g.is_nyquist(i)) return cplx(0.0, 0.0);
    return cplx(0.0, g.wavenumber(i) / k);
  });
}

/// Nodal product of two fields, returned in spectral space with the
/// dealiasing mask applied.
inline SpectralField dealiased_product(std::span<const double> a, std::span<const double> b,
                                       const Grid& g) {
  NodalField p(a.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = a[i] * b[i];
  return dealias(to_spectral(p, g));
}

/// Stream function -> velocity u = grad^perp psi = (-d psi/dy, d psi/dx).
inline VelocityField velocity_from_stream(const SpectralField& psi) {
  SpectralField u1 = derivative(psi, 2);
  u1 *= -1.0;
  return VelocityField::from_components(SpectralVector(std::move(u1), derivative(psi, 1)));
}

}  // namespace insdecay
