#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "insdecay/solver/momentum.hpp"

namespace insdecay {

struct StepOptions {
  double cfl_max = 0.5;
  /// Allowed excursion of rho outside [min rho0, max rho0]; negative selects
  /// 1e-3 (max rho0 - min rho0).
  double density_overshoot = -1.0;
  bool nonlinear = true;
  AdvectionScheme scheme = AdvectionScheme::spectral;
  ProjectionOptions projection;
};

/// Scalar diagnostics of one state. The first nine fields are the CSV schema.
struct Diagnostics {
  double t = 0.0;
  double l2_u = 0.0;
  double l2_grad_u = 0.0;
  double l2_ut = 0.0;
  double p_div = 0.0;
  double q_div_minus_gradpi = 0.0;
  double min_rho = 0.0;
  double max_rho = 0.0;
  double energy = 0.0;       // int rho |u|^2
  double dissipation = 0.0;  // int mu |grad u|^2
  double inertia = 0.0;      // int rho |u_t|^2
  double energy_rate = 0.0;  // int rho_t |u|^2 + 2 int rho u . u_t
  double mean_rho = 0.0;
  int projection_iterations = 0;
};

inline Diagnostics diagnose(const FlowState& s, const MomentumSolve& m) {
  const Grid& g = s.grid();
  const double w = g.cell_area();
  const NodalField& rho = s.rho.nodal();
  const auto rho_t = to_physical(transport_tendency(s.rho.spectral(), m.u_nodal));
  const ForceDecomposition f = force_decomposition(m);

  Diagnostics d;
  d.t = s.t;
  d.l2_u = l2_norm(s.u);
  d.l2_grad_u = l2_norm_gradient(s.u);
  d.l2_ut = f.ut_l2;
  d.p_div = f.p_div;
  d.q_div_minus_gradpi = f.q_div_minus_gradpi;
  d.min_rho = s.rho.min();
  d.max_rho = s.rho.max();
  d.mean_rho = s.rho.mean();
  d.projection_iterations = m.iterations;
  const auto& u = m.u_nodal;
  const auto& a = m.a_nodal;
  double e = 0.0, diss = 0.0, in = 0.0, rate = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double u2 = u.u1[i] * u.u1[i] + u.u2[i] * u.u2[i];
    double gu2 = 0.0;
    for (const auto& gr : m.grad_nodal) gu2 += gr[i] * gr[i];
    e += rho[i] * u2;
    diss += m.mu_nodal[i] * gu2;
    in += rho[i] * (a.u1[i] * a.u1[i] + a.u2[i] * a.u2[i]);
    rate += rho_t[i] * u2 + 2.0 * rho[i] * (u.u1[i] * a.u1[i] + u.u2[i] * a.u2[i]);
  }
  d.energy = e * w;
  d.dissipation = diss * w;
  d.inertia = in * w;
  d.energy_rate = rate * w;
  return d;
}

/// Integrating factor for mu0 Delta plus Heun (RK2) for everything else:
///   u*      = E (u + dt N(u))
///   u^{n+1} = E (u + dt/2 N(u)) + dt/2 N(u*),    E = e^{mu0 dt Delta}
/// with N(u) = u_t - mu0 Delta u. The density uses the matching Heun stages.
class Integrator {
 public:
  Integrator(ViscosityLaw law, StepOptions opt, double rho_lo, double rho_hi)
      : law_(std::move(law)), opt_(opt) {
    const double delta =
        opt_.density_overshoot >= 0.0 ? opt_.density_overshoot : 1e-3 * (rho_hi - rho_lo);
    lo_ = rho_lo - std::max(delta, 1e-12 * rho_hi);
    hi_ = rho_hi + std::max(delta, 1e-12 * rho_hi);
  }

  /// Integrator whose density band is taken from the initial state.
  static Integrator for_initial(const FlowState& s0, ViscosityLaw law, StepOptions opt = {}) {
    return Integrator(std::move(law), opt, s0.rho.min(), s0.rho.max());
  }

  const ViscosityLaw& law() const noexcept { return law_; }
  const StepOptions& options() const noexcept { return opt_; }
  double rho_lower() const noexcept { return lo_; }
  double rho_upper() const noexcept { return hi_; }

  MomentumSolve solve(const FlowState& s) const {
    return solve_momentum(s, law_, opt_.nonlinear, opt_.projection);
  }

  /// Advance by dt; `m0` is the momentum solve at `s` (reused for diagnostics).
  FlowState step(const FlowState& s, const MomentumSolve& m0, double dt) const {
    if (!(dt > 0.0)) throw DomainError("step: dt must be > 0");
    const Grid& g = s.grid();
    require_cfl(m0.u_nodal, g, dt, opt_.cfl_max);
    const double mu0 = law_.mu0();
    auto factor = [&](const SpectralVector& v, double tau) { return heat(v, mu0 * tau); };

    const SpectralVector& u = s.u.vec();
    SpectralVector n0 = m0.accel;
    n0.axpy(-mu0, laplacian(u));

    SpectralVector ustar_v = u;
    ustar_v.axpy(dt, n0);
    ustar_v = factor(ustar_v, dt);

    const SpectralField rho_hat = s.rho.spectral();
    SpectralField r0(g);
    DensityField rho_star = s.rho;
    if (opt_.scheme == AdvectionScheme::spectral) {
      r0 = transport_tendency(rho_hat, m0.u_nodal);
      rho_star = add_increment(s.rho, dt * r0);
    } else {
      rho_star = checked(g, semi_lagrangian_step(s.rho.nodal(), g, m0.u_nodal, dt));
    }

    const FlowState star(s.t + dt, VelocityField::from_components(ustar_v), rho_star);
    const MomentumSolve m1 = solve(star);
    SpectralVector n1 = m1.accel;
    n1.axpy(-mu0, laplacian(ustar_v));

    SpectralVector half = u;
    half.axpy(0.5 * dt, n0);
    SpectralVector next = factor(half, dt);
    next.axpy(0.5 * dt, n1);

    DensityField rho_next = s.rho;
    if (opt_.scheme == AdvectionScheme::spectral) {
      SpectralField r1 = transport_tendency(rho_hat + dt * r0, m1.u_nodal);
      r1 += r0;
      rho_next = add_increment(s.rho, (0.5 * dt) * r1);
    } else {
      NodalVelocity mid = m0.u_nodal;
      for (std::size_t i = 0; i < mid.u1.size(); ++i) {
        mid.u1[i] = 0.5 * (mid.u1[i] + m1.u_nodal.u1[i]);
        mid.u2[i] = 0.5 * (mid.u2[i] + m1.u_nodal.u2[i]);
      }
      rho_next = checked(g, semi_lagrangian_step(s.rho.nodal(), g, mid, dt));
    }
    require_bounds(rho_next, s.t + dt);
    return FlowState(s.t + dt, leray_project(next), std::move(rho_next));
  }

  FlowState step(const FlowState& s, double dt) const { return step(s, solve(s), dt); }

 private:
  DensityField add_increment(const DensityField& rho, const SpectralField& inc) const {
    const NodalField d = to_physical(inc);
    NodalField v = rho.nodal();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += d[i];
    return checked(rho.grid(), std::move(v));
  }

  DensityField checked(const Grid& g, NodalField v) const {
    for (double x : v) {
      if (!(x > 0.0)) throw DensityBoundsViolation("density lost positivity");
    }
    return DensityField(g, std::move(v));
  }

  void require_bounds(const DensityField& rho, double t) const {
    const double lo = rho.min(), hi = rho.max();
    if (lo < lo_ || hi > hi_) {
      throw DensityBoundsViolation("density range [" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "] left [" + std::to_string(lo_) + ", " +
                                   std::to_string(hi_) + "] at t = " + std::to_string(t));
    }
  }

  ViscosityLaw law_;
  StepOptions opt_;
  double lo_ = 0.0, hi_ = 0.0;
};

/// One step with the density band taken from `s` itself.
inline FlowState step(const FlowState& s, const ViscosityLaw& law, double dt,
                      const StepOptions& opt = {}) {
  return Integrator::for_initial(s, law, opt).step(s, dt);
}

struct RunOptions {
  double dt = 0.01;
  double t_final = 1.0;
  int diag_every = 1;       // steps between diagnostics samples
  int snapshot_every = 0;   // steps between snapshots; 0 keeps only first and last
  bool keep_snapshots = true;
  StepOptions step;
};

struct Snapshot {
  FlowState state;
  Diagnostics diag;
};

struct Trajectory {
  std::vector<Diagnostics> diagnostics;
  std::vector<Snapshot> snapshots;
  std::optional<FlowState> last;
  bool completed = false;
  std::string failure;
  int steps = 0;
};

/// Integrate to t_final. Step errors stop the run; the trajectory then holds
/// the last valid state and the error text instead of throwing.
inline Trajectory run(const FlowState& s0, const ViscosityLaw& law, const RunOptions& opt,
                      const std::function<void(const Snapshot&)>& on_snapshot = {}) {
  if (!(opt.dt > 0.0) || !(opt.t_final >= 0.0)) {
    throw DomainError("run: need dt > 0 and t_final >= 0");
  }
  if (opt.diag_every < 1 || opt.snapshot_every < 0) {
    throw DomainError("run: diag_every must be >= 1 and snapshot_every >= 0");
  }
  const Integrator integ = Integrator::for_initial(s0, law, opt.step);
  const long nsteps = static_cast<long>(std::ceil(opt.t_final / opt.dt - 1e-9));
  Trajectory traj;
  FlowState s = s0;
  auto emit = [&](const FlowState& st, const Diagnostics& d) {
    Snapshot snap{st, d};
    if (on_snapshot) on_snapshot(snap);
    if (opt.keep_snapshots) traj.snapshots.push_back(std::move(snap));
  };
  try {
    for (long k = 0; k < nsteps; ++k) {
      const MomentumSolve m = integ.solve(s);
      const bool sample = k % opt.diag_every == 0;
      const bool snap = k == 0 || (opt.snapshot_every > 0 && k % opt.snapshot_every == 0);
      if (sample || snap) {
        const Diagnostics d = diagnose(s, m);
        if (sample) traj.diagnostics.push_back(d);
        if (snap) emit(s, d);
      }
      const double t_next = k + 1 == nsteps ? opt.t_final : (k + 1) * opt.dt;
      FlowState next = integ.step(s, m, t_next - s.t);
      next.t = t_next;
      s = std::move(next);
      traj.steps = static_cast<int>(k + 1);
    }
    const Diagnostics d = diagnose(s, integ.solve(s));
    traj.diagnostics.push_back(d);
    emit(s, d);
    traj.completed = true;
  } catch (const Error& e) {
    traj.failure = e.what();
  }
  traj.last = s;
  return traj;
}

}  // namespace insdecay
