#pragma once

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "insdecay/config/sim_config.hpp"
#include "insdecay/harness/constants.hpp"
#include "insdecay/harness/decay.hpp"
#include "insdecay/harness/energy_ledger.hpp"
#include "insdecay/harness/fourier_splitting.hpp"
#include "insdecay/harness/initial_data.hpp"
#include "insdecay/io/csv.hpp"
#include "insdecay/io/report.hpp"
#include "insdecay/io/snapshot.hpp"
#include "insdecay/transport/block_transport.hpp"
#include "insdecay/transport/product_law.hpp"

namespace insdecay {

namespace fs = std::filesystem;

inline Grid make_grid(const SimConfig& c) { return Grid(c.grid.n, c.grid.l, c.grid.dealias); }

inline ViscosityLaw make_law(const SimConfig& c) {
  const auto& p = c.physics;
  if (p.viscosity == "affine") return ViscosityLaw::affine(p.mu0, p.viscosity_param);
  if (p.viscosity == "power") return ViscosityLaw::power(p.mu0, p.viscosity_param);
  return ViscosityLaw::table(p.table_rho, p.table_mu);
}

inline InitialDataSpec make_initial_spec(const SimConfig& c) {
  InitialDataSpec s;
  s.target_p = c.physics.p;
  s.alpha = c.physics.alpha;
  s.regularity = c.initial.regularity == "h1" ? Regularity::h1 : Regularity::h_alpha;
  s.amplitude = c.initial.amplitude;
  s.profile = c.initial.profile == "flat_disk" ? SpectralProfile::flat_disk(c.initial.k_c)
                                              : SpectralProfile::power(c.initial.sigma, c.initial.k_c);
  s.seed = c.run.seed;
  return s;
}

inline DensitySpec make_density_spec(const SimConfig& c) {
  return {c.physics.density_contrast, c.physics.k_rho, c.run.seed};
}

inline FlowState make_initial_state(const SimConfig& c) {
  const Grid g = make_grid(c);
  return FlowState(0.0, gen_initial_velocity(make_initial_spec(c), g),
                   gen_initial_density(make_density_spec(c), g));
}

inline RunOptions make_run_options(const SimConfig& c) {
  RunOptions o;
  o.dt = c.time.dt;
  o.t_final = c.time.t_final;
  o.diag_every = c.time.diag_every;
  o.snapshot_every = c.time.snapshot_every;
  o.keep_snapshots = false;
  o.step.cfl_max = c.time.cfl_max;
  o.step.density_overshoot = c.physics.density_overshoot;
  o.step.nonlinear = c.physics.nonlinear;
  o.step.scheme = c.physics.scheme == "spectral" ? AdvectionScheme::spectral
                                                 : AdvectionScheme::semi_lagrangian;
  o.step.projection.tolerance = c.physics.projection_tol;
  o.step.projection.max_iterations = c.physics.projection_max_iter;
  return o;
}

/// beta(p) of the configured data, used by the weight ladder.
inline Weight make_weight(const SimConfig& c) {
  return Weight::parse(c.harness.weight, beta_of(c.physics.p), c.physics.eps, c.harness.interp_r,
                       c.physics.alpha);
}

/// Configured override, else the default window; t_hi is clipped to both
/// t_final and t*.
inline FitWindow fit_window(const SimConfig& c, double mu0) {
  FitWindow w;
  if (c.harness.fit_t_hi > 0.0) {
    w = {c.harness.fit_t_lo, c.harness.fit_t_hi};
  } else {
    w = default_window(mu0, c.initial.k_c, c.grid.l);
  }
  w.t_hi = std::min({w.t_hi, c.time.t_final, box_cutoff(c.grid.l, mu0)});
  if (!(w.t_lo > 0.0 && w.t_lo < w.t_hi)) {
    throw DomainError("fit window (" + io::format_double(w.t_lo) + ", " + io::format_double(w.t_hi) +
                      ") is empty after clipping to t_final and t*");
  }
  return w;
}

inline std::string snapshot_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%06d.bin", index);
  return buf;
}

/// Decay fits of a finished run; an all-zero trajectory gives "empty".
inline void add_decay_fit(io::Report& rep, const SimConfig& c, const std::vector<Diagnostics>& diag,
                          double mu0, const VelocityField* u0) {
  bool empty = true;
  for (const auto& d : diag) empty = empty && d.l2_u == 0.0;
  if (empty) {
    rep.add("decay", "empty");
    return;
  }
  try {
    const FitWindow w = fit_window(c, mu0);
    const auto spec = make_initial_spec(c);
    const auto r = decay_report(diag, c.physics.p, spec.profile.expected_exponent(), w,
                                box_cutoff(c.grid.l, mu0), u0, mu0);
    rep.add("decay", "fitted")
        .add("fit_t_lo", w.t_lo)
        .add("fit_t_hi", w.t_hi)
        .add("box_cutoff", r.box_cutoff)
        .add("beta_p", r.beta_p)
        .add("expected_exponent", r.expected_exponent)
        .add("exponent_u", r.u.exponent)
        .add("exponent_u_ci", r.u.ci)
        .add("exponent_grad_u", r.grad_u.exponent)
        .add("exponent_grad_u_ci", r.grad_u.ci)
        .add("fit_samples", r.u.samples);
    if (u0) {
      rep.add("exponent_heat", r.heat.exponent)
          .add("exponent_heat_ci", r.heat.ci)
          .add("exponent_gap", std::abs(r.u.exponent - r.heat.exponent));
    }
  } catch (const Error& e) {
    rep.add("decay", "unavailable").add("decay_reason", e.what());
  }
}

struct SimulationSummary {
  bool completed = false;
  std::string failure;
  int steps = 0;
  fs::path dir;
};

/// Run one configured simulation into `dir`:
///   config.ini, diagnostics.csv, ledger.csv, splitting.csv,
///   snapshots/snap_NNNNNN.bin, report.txt, report.csv
inline SimulationSummary simulate(const SimConfig& c, const fs::path& dir) {
  fs::create_directories(dir / "snapshots");
  {
    std::ofstream os(dir / "config.ini");
    if (!os) throw Error("cannot write " + (dir / "config.ini").string());
    os << serialize(c);
  }
  const ViscosityLaw law = make_law(c);
  const FlowState s0 = make_initial_state(c);
  SplittingTracker tracker(c.harness.m_sweep, c.harness.g_numerator, c.harness.splitting_tol);
  int snap_index = 0;
  const Trajectory traj = run(s0, law, make_run_options(c), [&](const Snapshot& s) {
    io::write_snapshot((dir / "snapshots" / snapshot_name(snap_index++)).string(), s.state);
    tracker.add(s);
  });
  io::write_diagnostics((dir / "diagnostics.csv").string(), traj.diagnostics);

  io::Report rep("simulate");
  rep.add("completed", traj.completed).add("steps", traj.steps).add("snapshots", snap_index);
  if (!traj.completed) rep.add("failure", traj.failure);
  rep.add("mu0", law.mu0());
  if (!traj.diagnostics.empty()) {
    const auto& d0 = traj.diagnostics.front();
    const auto& d1 = traj.diagnostics.back();
    double lo = d0.min_rho, hi = d0.max_rho;
    for (const auto& d : traj.diagnostics) {
      lo = std::min(lo, d.min_rho);
      hi = std::max(hi, d.max_rho);
    }
    rep.add("t_end", d1.t)
        .add("energy_start", d0.energy)
        .add("energy_end", d1.energy)
        .add("min_rho", lo)
        .add("max_rho", hi);
  }
  add_decay_fit(rep, c, traj.diagnostics, law.mu0(), &s0.u);

  const EnergyLedger led = energy_ledger(traj.diagnostics, make_weight(c));
  io::write_table((dir / "ledger.csv").string(), ledger_table(led));
  rep.add("weight", led.weight.name())
      .add("sup_f_grad_u2", led.sup_f_grad_u2())
      .add("int_f_ut2", led.total_f_ut2())
      .add("int_forces", led.total_forces());
  if (led.rows.size() >= 2 && led.total_forces() > 0.0) {
    rep.add("forces_tail_fraction", tail_fraction_forces(led));
  }

  if (snap_index > 0) {
    const SplittingSweep sw = tracker.result();
    io::Table st;
    st.columns = {"M", "passed", "worst_violation", "scale", "tolerance"};
    for (const auto& r : sw.reports) {
      st.rows.push_back({r.M, r.passed ? 1.0 : 0.0, r.worst_violation, r.scale, r.tolerance});
    }
    io::write_table((dir / "splitting.csv").string(), st);
    rep.add("smallest_passing_M", sw.smallest_passing_M ? io::format_double(*sw.smallest_passing_M)
                                                        : std::string("none"));
  }
  rep.write((dir / "report.txt").string(), (dir / "report.csv").string(), c);
  return {traj.completed, traj.failure, traj.steps, dir};
}

/// Re-fit a finished run from its config.ini, diagnostics.csv and first snapshot.
inline io::Report decay_fit_run(const fs::path& dir, std::optional<FitWindow> window = {}) {
  for (const char* f : {"config.ini", "diagnostics.csv"}) {
    if (!fs::exists(dir / f)) throw Error("missing run artifact " + (dir / f).string());
  }
  SimConfig c = load_config((dir / "config.ini").string());
  if (window) {
    c.harness.fit_t_lo = window->t_lo;
    c.harness.fit_t_hi = window->t_hi;
  }
  const auto diag = io::diagnostics_from_table(io::read_table((dir / "diagnostics.csv").string()));
  const double mu0 = make_law(c).mu0();
  std::optional<FlowState> s0;
  const fs::path first = dir / "snapshots" / snapshot_name(0);
  if (fs::exists(first)) s0 = io::read_snapshot(first.string());
  io::Report rep("decay_fit");
  rep.add("run_dir", dir.string()).add("samples", diag.size());
  add_decay_fit(rep, c, diag, mu0, s0 ? &s0->u : nullptr);
  rep.write((dir / "decay_report.txt").string(), (dir / "decay_report.csv").string(), c);
  return rep;
}

/// Block-transport growth experiment on the [transport] grid.
inline io::Report transport_run(const SimConfig& c, const fs::path& dir) {
  fs::create_directories(dir);
  const auto& x = c.transport;
  const Grid g(x.n, x.l);
  VelocityField u = [&] {
    if (x.velocity == "rotation") return rigid_rotation(g, x.amplitude, 0.2865 * x.l, 0.1432 * x.l);
    auto a = sample(g, [&](double, double y) { return x.amplitude * std::sin(g.k0() * y); });
    return VelocityField::from_components(to_spectral_vector(a, NodalField(g.size(), 0.0), g));
  }();
  // rho0 from the product-law field family, band k_band / 4.
  BlockTransportExperiment e{product_law_field(g, c.run.seed, 0, 0.25 * x.k_band),
                             VelocitySource::constant(std::move(u))};
  e.eta = x.eta;
  e.horizon = x.horizon;
  e.dt = x.dt;
  e.sample_every = x.sample_every;
  e.cfl_max = x.cfl_max;
  e.threads = x.threads;
  const GrowthReport r = transport_block_experiment(e);
  io::write_table((dir / "growth.csv").string(), growth_table(r));
  io::write_table((dir / "block_matrix.csv").string(), block_matrix_table(r));
  io::Report rep("transport_reg");
  rep.add("eta", r.eta)
      .add("velocity", x.velocity)
      .add("steps", r.steps)
      .add("rho0_norm_eta", r.rho0_norm_eta)
      .add("rho0_norm_eta1", r.rho0_norm_eta1)
      .add("C_fit", r.C_fit)
      .add("superposition_error", r.superposition_error)
      .add("max_block_growth", r.max_block_growth);
  try {
    const DegreeFit f = fit_growth_degree(r);
    rep.add("growth_degree", f.degree).add("growth_degree_samples", f.samples);
    rep.add("growth_degree_limit", r.eta + 1.0);
  } catch (const Error& err) {
    rep.add("growth_degree", "unavailable").add("growth_degree_reason", err.what());
  }
  rep.write((dir / "transport_report.txt").string(), (dir / "transport_report.csv").string(), c);
  return rep;
}

inline SmallnessConstants smallness_constants(const SimConfig& c) {
  return {c.harness.C, c.harness.C0, c.harness.c0, c.harness.eta};
}

/// K, G and the smallness condition for the configured initial data.
inline std::pair<io::Report, SmallnessReport> smallness_run(const SimConfig& c, const fs::path& dir) {
  fs::create_directories(dir);
  const FlowState s0 = make_initial_state(c);
  const SmallnessReport s =
      check_smallness(s0.rho, s0.u, make_law(c), c.physics.p, smallness_constants(c));
  io::Report rep("check_smallness");
  rep.add("lp", s.norms.lp)
      .add("h1", s.norms.h1)
      .add("l2", s.norms.l2)
      .add("rho_l2", s.norms.rho_l2)
      .add("K", s.K)
      .add("G1", s.G.G1)
      .add("G2", s.G.G2)
      .add("G", s.G.G);
  for (const auto& t : s.G.g1_terms) rep.add("G1[" + t.label + "]", t.value);
  for (const auto& t : s.G.g2_terms) rep.add("G2[" + t.label + "]", t.value);
  rep.add("mu0", s.mu0)
      .add("besov_factor", s.besov_factor)
      .add("lhs", s.lhs)
      .add("log_lhs", s.log_lhs)
      .add("threshold", s.threshold)
      .add("margin", s.margin)
      .add("passed", s.passed);
  rep.write((dir / "smallness_report.txt").string(), (dir / "smallness_report.csv").string(), c);
  return {rep, s};
}

}  // namespace insdecay
