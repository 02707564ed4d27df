#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "insdecay/solver/flow_state.hpp"
#include "insdecay/solver/viscosity.hpp"

namespace insdecay {

struct ProjectionOptions {
  double tolerance = 1e-10;
  int max_iterations = 50;
};

/// Everything the momentum balance produces at one state.
///
///   rho a + grad Pi = div(mu(rho) M(u)) - rho u.grad u,   div a = 0
struct MomentumSolve {
  SpectralVector viscous;    // div(mu M(u)) = mu0 Delta u + div((mu - mu0) M(u))
  SpectralVector advection;  // dealiased rho u.grad u (zero for the linear problem)
  SpectralVector accel;      // a = u_t
  SpectralVector rho_accel;  // dealiased rho a
  NodalVelocity u_nodal;
  NodalVelocity a_nodal;
  NodalField mu_nodal;
  std::array<NodalField, 4> grad_nodal;  // d1u1, d2u1, d1u2, d2u2
  int iterations = 0;
  double increment = 0.0;  // last relative fixed-point increment

  /// grad Pi = Q[div(mu M(u)) - rho a - rho u.grad u]
  SpectralVector grad_pi() const {
    return gradient_part(viscous - rho_accel - advection);
  }
};

namespace detail {

/// Nodal products (s * x, s * y) of a spectral vector, dealiased.
inline SpectralVector dealiased_scale(const NodalField& s, const NodalVelocity& v, const Grid& g) {
  NodalField a(g.size()), b(g.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = s[i] * v.u1[i];
    b[i] = s[i] * v.u2[i];
  }
  return dealias(to_spectral_vector(a, b, g));
}

}  // namespace detail

/// Solve the density-weighted projection by fixed-point iteration
///   a_{k+1} = P[F - dealias((rho - rho_bar) a_k)] / rho_bar,
/// rho_bar = (min + max) / 2, which contracts with factor (max - min) / (max + min).
inline MomentumSolve solve_momentum(const FlowState& s, const ViscosityLaw& law,
                                    bool nonlinear = true, const ProjectionOptions& opt = {}) {
  const Grid& g = s.grid();
  const std::size_t sz = g.size();
  const SpectralVector& u = s.u.vec();
  const NodalField& rho = s.rho.nodal();
  const double mu0 = law.mu0();

  MomentumSolve out{SpectralVector(g), SpectralVector(g), SpectralVector(g), SpectralVector(g),
                    NodalVelocity::from(u), {}, law.apply(rho), {}};
  auto [d1u1, d2u1] = to_physical(derivative(u.x, 1), derivative(u.x, 2));
  auto [d1u2, d2u2] = to_physical(derivative(u.y, 1), derivative(u.y, 2));

  // Viscous term: exact mu0 Delta u plus the dealiased perturbation stress.
  NodalField s11(sz), s12(sz), s22(sz);
  for (std::size_t i = 0; i < sz; ++i) {
    const double dmu = out.mu_nodal[i] - mu0;
    s11[i] = 2.0 * dmu * d1u1[i];
    s22[i] = 2.0 * dmu * d2u2[i];
    s12[i] = dmu * (d2u1[i] + d1u2[i]);
  }
  auto [f11, f12] = to_spectral(s11, s12, g);
  SpectralField f22 = dealias(to_spectral(s22, g));
  f11 = dealias(std::move(f11));
  f12 = dealias(std::move(f12));
  out.viscous = laplacian(u);
  out.viscous *= mu0;
  out.viscous.x += derivative(f11, 1) + derivative(f12, 2);
  out.viscous.y += derivative(f12, 1) + derivative(f22, 2);

  if (nonlinear) {
    const auto& un = out.u_nodal;
    NodalField a1(sz), a2(sz);
    for (std::size_t i = 0; i < sz; ++i) {
      a1[i] = rho[i] * (un.u1[i] * d1u1[i] + un.u2[i] * d2u1[i]);
      a2[i] = rho[i] * (un.u1[i] * d1u2[i] + un.u2[i] * d2u2[i]);
    }
    out.advection = dealias(to_spectral_vector(a1, a2, g));
  }
  out.grad_nodal = {std::move(d1u1), std::move(d2u1), std::move(d1u2), std::move(d2u2)};

  const SpectralVector force = out.viscous - out.advection;
  const double lo = s.rho.min(), hi = s.rho.max();
  const double rho_bar = 0.5 * (lo + hi);
  NodalField drho(sz);
  for (std::size_t i = 0; i < sz; ++i) drho[i] = rho[i] - rho_bar;
  const bool uniform = hi == lo;

  SpectralVector a = leray_project(force).vec();
  a *= 1.0 / rho_bar;
  if (!uniform) {
    for (int it = 1;; ++it) {
      out.a_nodal = NodalVelocity::from(a);
      SpectralVector rhs = force - detail::dealiased_scale(drho, out.a_nodal, g);
      SpectralVector next = leray_project(rhs).vec();
      next *= 1.0 / rho_bar;
      const double norm = l2_norm(next);
      const double inc = norm > 0.0 ? l2_norm(next - a) / norm : 0.0;
      a = std::move(next);
      out.iterations = it;
      out.increment = inc;
      if (inc <= opt.tolerance) break;
      if (it >= opt.max_iterations) {
        throw ProjectionNotConverged(
            "momentum projection: relative increment " + std::to_string(inc) + " after " +
            std::to_string(it) + " iterations (density contrast " +
            std::to_string((hi - lo) / (hi + lo)) + ")");
      }
    }
  }
  out.a_nodal = NodalVelocity::from(a);
  out.rho_accel = detail::dealiased_scale(rho, out.a_nodal, g);
  out.accel = std::move(a);
  return out;
}

/// u_t = a from the spatial terms.
inline VelocityField momentum_rhs(const FlowState& s, const ViscosityLaw& law,
                                  bool nonlinear = true, const ProjectionOptions& opt = {}) {
  return VelocityField::from_components(solve_momentum(s, law, nonlinear, opt).accel);
}

struct ForceDecomposition {
  double p_div = 0.0;               // ||P div(mu M(u))||
  double q_div_minus_gradpi = 0.0;  // ||Q div(mu M(u)) - grad Pi||
  double ut_l2 = 0.0;               // ||u_t||
  SpectralVector grad_pi;
  double p_identity_residual = 0.0;  // ||P div(mu M) - P(rho a + rho u.grad u)||
  double q_identity_residual = 0.0;  // ||(Q div(mu M) - grad Pi) - Q(rho a + rho u.grad u)||
};

inline ForceDecomposition force_decomposition(const MomentumSolve& m) {
  ForceDecomposition f{0.0, 0.0, 0.0, m.grad_pi(), 0.0, 0.0};
  const SpectralVector p_visc = leray_project(m.viscous).vec();
  const SpectralVector q_part = gradient_part(m.viscous) - f.grad_pi;
  const SpectralVector inertia = m.rho_accel + m.advection;
  f.p_div = l2_norm(p_visc);
  f.q_div_minus_gradpi = l2_norm(q_part);
  f.ut_l2 = l2_norm(m.accel);
  f.p_identity_residual = l2_norm(p_visc - leray_project(inertia).vec());
  f.q_identity_residual = l2_norm(q_part - gradient_part(inertia));
  return f;
}

inline ForceDecomposition force_decomposition(const FlowState& s, const ViscosityLaw& law,
                                              bool nonlinear = true,
                                              const ProjectionOptions& opt = {}) {
  return force_decomposition(solve_momentum(s, law, nonlinear, opt));
}

}  // namespace insdecay
