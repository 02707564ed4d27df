#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "insdecay/spectral/norms.hpp"

namespace insdecay {

/// Positive nodal density on a grid.
class DensityField {
 public:
  DensityField(const Grid& g, NodalField nodal) : grid_(g), nodal_(std::move(nodal)) {
    if (nodal_.size() != grid_.size()) {
      throw ShapeMismatch("DensityField: expected " + std::to_string(grid_.size()) +
                          " nodal values, got " + std::to_string(nodal_.size()));
    }
    for (double v : nodal_) {
      if (!(v > 0.0)) throw DomainError("DensityField: density must be positive");
    }
  }

  static DensityField constant(const Grid& g, double value) {
    return DensityField(g, NodalField(g.size(), value));
  }

  const Grid& grid() const noexcept { return grid_; }
  const NodalField& nodal() const noexcept { return nodal_; }
  double operator[](std::size_t i) const noexcept { return nodal_[i]; }

  double min() const { return *std::min_element(nodal_.begin(), nodal_.end()); }
  double max() const { return *std::max_element(nodal_.begin(), nodal_.end()); }
  double mean() const {
    double s = 0.0;
    for (double v : nodal_) s += v;
    return s / static_cast<double>(nodal_.size());
  }
  SpectralField spectral() const { return to_spectral(nodal_, grid_); }

 private:
  Grid grid_;
  NodalField nodal_;
};

enum class AdvectionScheme { spectral, semi_lagrangian };

inline const char* to_string(AdvectionScheme s) {
  return s == AdvectionScheme::spectral ? "spectral" : "semi_lagrangian";
}

/// Nodal velocity samples (u1, u2).
struct NodalVelocity {
  NodalField u1, u2;

  static NodalVelocity from(const SpectralVector& v) {
    auto [a, b] = to_physical(v);
    return {std::move(a), std::move(b)};
  }
  double max_speed() const {
    double m = 0.0;
    for (std::size_t i = 0; i < u1.size(); ++i) m = std::max(m, std::hypot(u1[i], u2[i]));
    return m;
  }
};

/// max|u| dt / dx
inline double courant_number(const NodalVelocity& u, const Grid& g, double dt) {
  return u.max_speed() * dt / g.dx();
}

inline void require_cfl(const NodalVelocity& u, const Grid& g, double dt, double cfl_max) {
  const double c = courant_number(u, g, dt);
  if (c > cfl_max) throw CflViolation(c, cfl_max);
}

/// -dealias(u . grad q), the transport tendency of a passive scalar.
inline SpectralField transport_tendency(const SpectralField& q, const NodalVelocity& u) {
  const Grid& g = q.grid();
  auto [qx, qy] = to_physical(gradient(q));
  NodalField adv(g.size());
  for (std::size_t i = 0; i < adv.size(); ++i) adv[i] = -(u.u1[i] * qx[i] + u.u2[i] * qy[i]);
  return dealias(to_spectral(adv, g));
}

/// One classical RK4 step of q_t + u . grad q = 0 with u(t) supplied by
/// `velocity_at(stage_time_fraction)` for fractions 0, 1/2, 1.
template <class VelocityAt>
SpectralField rk4_transport_increment(const SpectralField& q, double dt, VelocityAt&& velocity_at) {
  const NodalVelocity u0 = velocity_at(0.0);
  const NodalVelocity uh = velocity_at(0.5);
  const NodalVelocity u1 = velocity_at(1.0);
  SpectralField k1 = transport_tendency(q, u0);
  SpectralField k2 = transport_tendency(q + (0.5 * dt) * k1, uh);
  SpectralField k3 = transport_tendency(q + (0.5 * dt) * k2, uh);
  SpectralField k4 = transport_tendency(q + dt * k3, u1);
  SpectralField inc = k1;
  inc.axpy(2.0, k2);
  inc.axpy(2.0, k3);
  inc += k4;
  inc *= dt / 6.0;
  return inc;
}

inline SpectralField rk4_transport(const SpectralField& q, const NodalVelocity& u, double dt) {
  return q + rk4_transport_increment(q, dt, [&](double) -> const NodalVelocity& { return u; });
}

namespace detail {

inline double cubic_weight(double t, int k) {
  // Catmull-Rom weights for offsets -1, 0, 1, 2.
  const double t2 = t * t, t3 = t2 * t;
  switch (k) {
    case 0: return 0.5 * (-t3 + 2 * t2 - t);
    case 1: return 0.5 * (3 * t3 - 5 * t2 + 2);
    case 2: return 0.5 * (-3 * t3 + 4 * t2 + t);
    default: return 0.5 * (t3 - t2);
  }
}

/// Periodic bicubic interpolation at (x, y); with `clamp` the result is
/// limited to the range of the four surrounding nodes.
inline double interpolate(const NodalField& f, const Grid& g, double x, double y, bool clamp) {
  const int n = g.n();
  const double sx = x / g.dx(), sy = y / g.dx();
  const double fx = std::floor(sx), fy = std::floor(sy);
  const double tx = sx - fx, ty = sy - fy;
  const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
  auto at = [&](int i, int j) {
    return f[g.index(((i % n) + n) % n, ((j % n) + n) % n)];
  };
  double v = 0.0;
  for (int b = 0; b < 4; ++b) {
    double row = 0.0;
    for (int a = 0; a < 4; ++a) row += cubic_weight(tx, a) * at(ix - 1 + a, iy - 1 + b);
    v += cubic_weight(ty, b) * row;
  }
  if (clamp) {
    const double c00 = at(ix, iy), c10 = at(ix + 1, iy), c01 = at(ix, iy + 1),
                 c11 = at(ix + 1, iy + 1);
    const double lo = std::min({c00, c10, c01, c11}), hi = std::max({c00, c10, c01, c11});
    v = std::clamp(v, lo, hi);
  }
  return v;
}

}  // namespace detail

/// Semi-Lagrangian step: midpoint backtrace, bicubic interpolation clamped
/// to the local cell range, so max/min of the field never grow.
inline NodalField semi_lagrangian_step(const NodalField& q, const Grid& g, const NodalVelocity& u,
                                       double dt) {
  NodalField out(q.size());
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.n(); ++ix) {
      const std::size_t k = g.index(ix, iy);
      const double x = g.x(ix), y = g.y(iy);
      const double xm = x - 0.5 * dt * u.u1[k], ym = y - 0.5 * dt * u.u2[k];
      const double um = detail::interpolate(u.u1, g, xm, ym, false);
      const double vm = detail::interpolate(u.u2, g, xm, ym, false);
      out[k] = detail::interpolate(q, g, x - dt * um, y - dt * vm, true);
    }
  }
  return out;
}

/// One transport step of the density by a frozen divergence-free velocity.
/// Spectral scheme: classical RK4 with dealiased tendencies.
inline DensityField advect_density(const DensityField& rho, const VelocityField& u, double dt,
                                   double cfl_max = 1.0,
                                   AdvectionScheme scheme = AdvectionScheme::spectral) {
  if (!(dt > 0.0)) throw DomainError("advect_density: dt must be > 0");
  const Grid& g = rho.grid();
  require_same_grid(g, u.grid(), "advect_density");
  const NodalVelocity uv = NodalVelocity::from(u.vec());
  require_cfl(uv, g, dt, cfl_max);
  if (scheme == AdvectionScheme::semi_lagrangian) {
    return DensityField(g, semi_lagrangian_step(rho.nodal(), g, uv, dt));
  }
  SpectralField inc = rk4_transport_increment(
      rho.spectral(), dt, [&](double) -> const NodalVelocity& { return uv; });
  NodalField d = to_physical(inc);
  NodalField out = rho.nodal();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
  return DensityField(g, std::move(out));
}

}  // namespace insdecay
