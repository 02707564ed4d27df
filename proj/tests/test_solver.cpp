#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "insdecay/besov/littlewood_paley.hpp"
#include "insdecay/io/csv.hpp"
#include "insdecay/io/snapshot.hpp"
#include "insdecay/solver/integrator.hpp"
#include "test_support.hpp"

using namespace insdecay;
using Catch::Approx;
using testing::random_field;
using testing::rel_l2;

namespace {

constexpr double kPi = std::numbers::pi;

VelocityField taylor_green(const Grid& g, double amp) {
  const double k = g.k0();
  auto a = sample(g, [&](double x, double y) { return amp * std::sin(k * x) * std::cos(k * y); });
  auto b = sample(g, [&](double x, double y) { return -amp * std::cos(k * x) * std::sin(k * y); });
  return leray_project(to_spectral_vector(a, b, g));
}

DensityField smooth_density(const Grid& g, std::mt19937_64& gen, double contrast, int band) {
  SpectralField f = random_field(g, gen, band);
  f[0] = 0.0;
  NodalField v = to_physical(f);
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  for (auto& x : v) x = 1.0 + contrast * x / m;
  return DensityField(g, std::move(v));
}

VelocityField random_velocity(const Grid& g, std::mt19937_64& gen, double amp, int band) {
  SpectralField psi = random_field(g, gen, band);
  VelocityField u = velocity_from_stream(psi);
  u *= amp / lp_norm(u, kInf);
  return u;
}

// Zero-pad a spectral field from grid g to grid h (h.n() >= g.n()).
SpectralField pad(const SpectralField& f, const Grid& h) {
  const Grid& g = f.grid();
  SpectralField out(h);
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.n(); ++ix) {
      if (g.is_nyquist(ix) || g.is_nyquist(iy)) continue;
      out.at_mode(g.mode(ix), g.mode(iy)) = f(ix, iy);
    }
  }
  return out;
}

SpectralField truncate(const SpectralField& f, const Grid& g) {
  SpectralField out(g);
  const Grid& h = f.grid();
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.n(); ++ix) {
      if (g.is_nyquist(ix) || g.is_nyquist(iy)) continue;
      const int mx = g.mode(ix), my = g.mode(iy);
      out(ix, iy) = f(((mx % h.n()) + h.n()) % h.n(), ((my % h.n()) + h.n()) % h.n());
    }
  }
  return out;
}

// Brute-force acceleration on a doubled grid: every term formed nodally
// with the full viscosity, no dealiasing, and the projection iterated
// around the mean density instead of the mid-range value.
SpectralVector brute_acceleration(const FlowState& s, const ViscosityLaw& law) {
  const Grid& g0 = s.grid();
  const Grid h(2 * g0.n(), g0.l(), 1.0);
  const SpectralField u1 = pad(s.u.u1(), h), u2 = pad(s.u.u2(), h);
  const NodalField rho = to_physical(pad(s.rho.spectral(), h));
  const NodalField mu = law.apply(rho);
  const NodalField uu1 = to_physical(u1), uu2 = to_physical(u2);
  const NodalField a11 = to_physical(derivative(u1, 1)), a12 = to_physical(derivative(u1, 2));
  const NodalField a21 = to_physical(derivative(u2, 1)), a22 = to_physical(derivative(u2, 2));
  NodalField s11(h.size()), s12(h.size()), s22(h.size()), c1(h.size()), c2(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    s11[i] = 2 * mu[i] * a11[i];
    s22[i] = 2 * mu[i] * a22[i];
    s12[i] = mu[i] * (a12[i] + a21[i]);
    c1[i] = rho[i] * (uu1[i] * a11[i] + uu2[i] * a12[i]);
    c2[i] = rho[i] * (uu1[i] * a21[i] + uu2[i] * a22[i]);
  }
  SpectralVector force(derivative(to_spectral(s11, h), 1) + derivative(to_spectral(s12, h), 2) -
                           to_spectral(c1, h),
                       derivative(to_spectral(s12, h), 1) + derivative(to_spectral(s22, h), 2) -
                           to_spectral(c2, h));
  double mean = 0.0;
  for (double r : rho) mean += r;
  mean /= static_cast<double>(rho.size());
  SpectralVector a = leray_project(force).vec();
  a *= 1.0 / mean;
  for (int it = 0; it < 200; ++it) {
    const NodalField b1 = to_physical(a.x), b2 = to_physical(a.y);
    NodalField p1(h.size()), p2(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      p1[i] = (rho[i] - mean) * b1[i];
      p2[i] = (rho[i] - mean) * b2[i];
    }
    SpectralVector next =
        leray_project(force - SpectralVector(to_spectral(p1, h), to_spectral(p2, h))).vec();
    next *= 1.0 / mean;
    const double inc = l2_norm(next - a);
    a = std::move(next);
    if (inc <= 1e-15 * l2_norm(a)) break;
  }
  return SpectralVector(truncate(a.x, g0), truncate(a.y, g0));
}

}  // namespace

TEST_CASE("viscosity laws", "[solver]") {
  auto aff = ViscosityLaw::affine(0.7, 0.3);
  CHECK(aff(1.0) == 0.7);
  CHECK(aff(2.0) == Approx(1.0));
  auto pw = ViscosityLaw::power(2.0, 1.5);
  CHECK(pw(1.0) == 2.0);
  CHECK(pw(4.0) == Approx(16.0));
  auto tab = ViscosityLaw::table({0.5, 0.8, 1.0, 1.3, 2.0}, {0.4, 0.7, 1.1, 1.3, 2.0});
  CHECK(tab.mu0() == Approx(1.1));
  CHECK(tab(0.8) == Approx(0.7));
  CHECK(tab(1.6) > 1.3);
  CHECK(tab(1.6) < 2.0);
  CHECK_THROWS_AS(tab(2.5), DomainError);
  CHECK_THROWS_AS(ViscosityLaw::table({1.2, 1.3, 1.5, 2.0}, {1, 1, 1, 1}), DomainError);
  CHECK_THROWS_AS(ViscosityLaw::affine(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(ViscosityLaw::affine(1.0, 2.0).require_positive(0.4, 1.5), DomainError);
  CHECK_NOTHROW(ViscosityLaw::affine(1.0, 0.5).require_positive(0.5, 1.5));
}

TEST_CASE("density field validation", "[solver]") {
  Grid g(16, 1.0);
  CHECK_THROWS_AS(DensityField(g, NodalField(g.size(), -1.0)), DomainError);
  CHECK_THROWS_AS(DensityField(g, NodalField(3, 1.0)), ShapeMismatch);
}

TEST_CASE("advecting a constant density changes nothing", "[solver]") {
  Grid g(32, 3.0);
  std::mt19937_64 gen(1);
  auto u = random_velocity(g, gen, 0.5, 6);
  auto rho = DensityField::constant(g, 1.25);
  auto out = advect_density(rho, u, 0.01);
  CHECK(out.nodal() == rho.nodal());
  CHECK_THROWS_AS(advect_density(rho, u, 0.0), DomainError);
  CHECK_THROWS_AS(advect_density(rho, u, 10.0), CflViolation);
}

TEST_CASE("uniform translation of a smooth density", "[solver]") {
  Grid g(256, 2.0);
  const double c = 0.8;
  auto u1 = to_spectral(NodalField(g.size(), c), g);
  auto u = VelocityField::from_components(SpectralVector(u1, SpectralField(g)));
  auto profile = [&](double x, double y) {
    const double k = g.k0();
    return 1.0 + 0.2 * std::sin(k * x) * std::cos(2 * k * y) + 0.1 * std::cos(3 * k * x + 1.0);
  };
  DensityField rho(g, sample(g, profile));
  const double mean0 = rho.mean();
  const double dt = 0.002;
  const int steps = 50;
  for (int i = 0; i < steps; ++i) rho = advect_density(rho, u, dt);
  DensityField exact(g, sample(g, [&](double x, double y) { return profile(x - c * dt * steps, y); }));
  NodalField diff(g.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = rho[i] - exact[i];
  CHECK(lp_norm(diff, g, 2.0) <= 1e-6);
  CHECK(std::abs(rho.mean() - mean0) <= 1e-10 * mean0);
}

TEST_CASE("rigid rotation returns the density after one period", "[solver]") {
  Grid g(128, 1.0);
  const double omega = 2 * kPi, r1 = 0.25, r2 = 0.45;
  auto rate = [&](double r) { return omega * (1.0 - lp::smooth_step((r - r1) / (r2 - r1))); };
  auto a = sample(g, [&](double x, double y) {
    const double dx = x - 0.5, dy = y - 0.5;
    return -rate(std::hypot(dx, dy)) * dy;
  });
  auto b = sample(g, [&](double x, double y) {
    const double dx = x - 0.5, dy = y - 0.5;
    return rate(std::hypot(dx, dy)) * dx;
  });
  VelocityField u = leray_project(to_spectral_vector(a, b, g));
  auto blob = [&](double x, double y) {
    const double dx = x - 0.62, dy = y - 0.5;
    return 1.0 + 0.5 * std::exp(-(dx * dx + dy * dy) / (2 * 0.03 * 0.03));
  };
  const DensityField rho0(g, sample(g, blob));
  DensityField rho = rho0;
  const int steps = 800;
  for (int i = 0; i < steps; ++i) rho = advect_density(rho, u, 1.0 / steps);
  NodalField diff(g.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = rho[i] - rho0[i];
  CHECK(lp_norm(diff, g, 2.0) <= 1e-3);
  CHECK(std::abs(rho.mean() - rho0.mean()) <= 1e-10 * rho0.mean());
}

TEST_CASE("semi-Lagrangian transport keeps the bounds", "[solver]") {
  Grid g(64, 1.0);
  std::mt19937_64 gen(2);
  auto u = random_velocity(g, gen, 1.0, 5);
  auto rho = DensityField(g, sample(g, [](double x, double y) {
                            return 1.0 + 0.5 * (std::abs(x - 0.5) < 0.2 && std::abs(y - 0.5) < 0.2);
                          }));
  const double lo = rho.min(), hi = rho.max();
  for (int i = 0; i < 40; ++i) {
    rho = advect_density(rho, u, 0.005, 1.0, AdvectionScheme::semi_lagrangian);
  }
  CHECK(rho.min() >= lo);
  CHECK(rho.max() <= hi);
}

TEST_CASE("momentum tendency of Taylor-Green and of rest", "[solver]") {
  Grid g(32, 2 * kPi);
  auto law = ViscosityLaw::affine(0.3, 0.0);
  FlowState tg(0.0, taylor_green(g, 1.0), DensityField::constant(g, 1.0));
  VelocityField a = momentum_rhs(tg, law);
  SpectralVector expect = tg.u.vec();
  expect *= -2.0 * 0.3 * g.k0() * g.k0();
  CHECK(rel_l2(a.vec(), expect) <= 1e-12);

  FlowState rest(0.0, VelocityField(g), DensityField::constant(g, 1.3));
  CHECK(l2_norm(momentum_rhs(rest, law)) == 0.0);
  auto f = force_decomposition(rest, law);
  CHECK(f.p_div == 0.0);
  CHECK(f.q_div_minus_gradpi == 0.0);
  CHECK(f.ut_l2 == 0.0);
}

TEST_CASE("momentum tendency matches a doubled-resolution assembly", "[solver]") {
  Grid g(48, 5.0);
  std::mt19937_64 gen(3);
  FlowState s(0.0, random_velocity(g, gen, 0.1, 2), smooth_density(g, gen, 0.005, 2));
  auto law = ViscosityLaw::affine(0.5, 0.4);
  auto m = solve_momentum(s, law);
  CHECK(divergence_ratio(m.accel) <= 1e-10);
  CHECK(rel_l2(m.accel, brute_acceleration(s, law)) <= 1e-6);
}

TEST_CASE("Taylor-Green pressure gradient", "[solver]") {
  Grid g(32, 2 * kPi);
  const double amp = 0.7;
  FlowState tg(0.0, taylor_green(g, amp), DensityField::constant(g, 1.0));
  auto f = force_decomposition(tg, ViscosityLaw::affine(0.2, 0.0));
  auto px = sample(g, [&](double x, double) { return -0.5 * amp * amp * std::sin(2 * x); });
  auto py = sample(g, [&](double, double y) { return -0.5 * amp * amp * std::sin(2 * y); });
  CHECK(rel_l2(f.grad_pi, to_spectral_vector(px, py, g)) <= 1e-6);
}

TEST_CASE("force identities hold on random states", "[solver]") {
  Grid g(64, 7.0);
  std::mt19937_64 gen(4);
  FlowState s(0.0, random_velocity(g, gen, 0.3, 6), smooth_density(g, gen, 0.1, 5));
  auto law = ViscosityLaw::power(0.8, 1.2);
  auto m = solve_momentum(s, law);
  auto f = force_decomposition(m);
  CHECK(m.iterations > 1);
  const double scale = std::hypot(f.p_div, f.q_div_minus_gradpi);
  CHECK(f.p_identity_residual <= 1e-8 * scale);
  CHECK(f.q_identity_residual <= 1e-8 * scale);
  const SpectralVector inertia = m.rho_accel + m.advection;
  const double via_identity = std::pow(l2_norm(leray_project(inertia).vec()), 2) +
                              std::pow(l2_norm(gradient_part(inertia)), 2);
  CHECK(via_identity == Approx(scale * scale).epsilon(1e-8));
}

TEST_CASE("projection reports non-convergence", "[solver]") {
  Grid g(32, 4.0);
  std::mt19937_64 gen(5);
  FlowState s(0.0, random_velocity(g, gen, 0.3, 4), smooth_density(g, gen, 0.9, 4));
  ProjectionOptions opt;
  opt.max_iterations = 3;
  CHECK_THROWS_AS(solve_momentum(s, ViscosityLaw::affine(1.0, 0.0), true, opt),
                  ProjectionNotConverged);
}

TEST_CASE("Taylor-Green decays at the exact rate", "[solver]") {
  Grid g(128, 2 * kPi);
  const double mu0 = 0.5;
  auto law = ViscosityLaw::affine(mu0, 0.0);
  FlowState s(0.0, taylor_green(g, 1.0), DensityField::constant(g, 1.0));
  const double e0 = l2_norm(s.u);
  RunOptions opt;
  opt.dt = 0.01;
  opt.t_final = 1.0;
  opt.keep_snapshots = false;
  auto traj = run(s, law, opt);
  REQUIRE(traj.completed);
  double worst = 0.0;
  for (const auto& d : traj.diagnostics) {
    const double exact = e0 * std::exp(-2 * mu0 * d.t);
    worst = std::max(worst, std::abs(d.l2_u - exact) / exact);
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("rest state stays at rest", "[solver]") {
  Grid g(32, 3.0);
  std::mt19937_64 gen(6);
  FlowState s(0.0, VelocityField(g), smooth_density(g, gen, 0.05, 4));
  auto next = step(s, ViscosityLaw::affine(1.0, 0.3), 0.1);
  CHECK(l2_norm(next.u) == 0.0);
  CHECK(next.rho.nodal() == s.rho.nodal());
}

TEST_CASE("second-order convergence on variable-density data", "[solver]") {
  Grid g(32, 2 * kPi);
  std::mt19937_64 gen(7);
  auto law = ViscosityLaw::affine(0.1, 0.05);
  VelocityField u0 = taylor_green(g, 1.0);
  u0.mutable_vec() += random_velocity(g, gen, 0.2, 3).vec();
  FlowState s0(0.0, u0, smooth_density(g, gen, 0.1, 3));
  auto solve = [&](double dt) {
    RunOptions opt;
    opt.dt = dt;
    opt.t_final = 0.5;
    opt.keep_snapshots = false;
    opt.diag_every = 1000;
    // Nodal extrema of a coarse band-limited field move with the grid phase.
    opt.step.density_overshoot = 0.05;
    auto traj = run(s0, law, opt);
    INFO(traj.failure);
    REQUIRE(traj.completed);
    return *traj.last;
  };
  auto a = solve(0.02), b = solve(0.01), c = solve(0.005);
  const double e1 = l2_norm(a.u.vec() - b.u.vec()), e2 = l2_norm(b.u.vec() - c.u.vec());
  const double order = std::log2(e1 / e2);
  CHECK(order >= 1.9);
}

TEST_CASE("energy is nonincreasing and density stays in its band", "[solver]") {
  Grid g(48, 10.0);
  std::mt19937_64 gen(8);
  FlowState s(0.0, random_velocity(g, gen, 0.2, 5), smooth_density(g, gen, 0.05, 4));
  RunOptions opt;
  opt.dt = 0.05;
  opt.t_final = 3.0;
  opt.keep_snapshots = false;
  auto traj = run(s, ViscosityLaw::affine(0.2, 0.1), opt);
  REQUIRE(traj.completed);
  for (std::size_t i = 1; i < traj.diagnostics.size(); ++i) {
    CHECK(traj.diagnostics[i].energy <= traj.diagnostics[i - 1].energy * (1 + 1e-9));
    CHECK(traj.diagnostics[i].energy_rate <= 0.0);
    CHECK(std::abs(traj.diagnostics[i].mean_rho - traj.diagnostics[0].mean_rho) <= 1e-10);
  }
}

TEST_CASE("run of zero data and determinism", "[solver]") {
  Grid g(32, 5.0);
  FlowState zero(0.0, VelocityField(g), DensityField::constant(g, 1.0));
  RunOptions opt;
  opt.dt = 0.1;
  opt.t_final = 1.0;
  auto traj = run(zero, ViscosityLaw::affine(1.0, 0.0), opt);
  REQUIRE(traj.completed);
  for (const auto& d : traj.diagnostics) {
    CHECK(d.l2_u == 0.0);
    CHECK(d.l2_grad_u == 0.0);
    CHECK(d.l2_ut == 0.0);
    CHECK(d.p_div == 0.0);
    CHECK(d.q_div_minus_gradpi == 0.0);
    CHECK(d.energy == 0.0);
  }

  std::mt19937_64 gen(9);
  FlowState s(0.0, random_velocity(g, gen, 0.3, 4), smooth_density(g, gen, 0.05, 4));
  auto law = ViscosityLaw::affine(0.5, 0.2);
  std::ostringstream a, b;
  io::write_table(a, io::diagnostics_table(run(s, law, opt).diagnostics));
  io::write_table(b, io::diagnostics_table(run(s, law, opt).diagnostics));
  CHECK(a.str() == b.str());
}

TEST_CASE("failed runs keep the last valid state", "[solver]") {
  Grid g(32, 5.0);
  std::mt19937_64 gen(10);
  FlowState s(0.0, random_velocity(g, gen, 5.0, 4), DensityField::constant(g, 1.0));
  RunOptions opt;
  opt.dt = 0.2;
  opt.t_final = 1.0;
  auto traj = run(s, ViscosityLaw::affine(0.1, 0.0), opt);
  CHECK_FALSE(traj.completed);
  CHECK(traj.failure.find("CFL") != std::string::npos);
  REQUIRE(traj.last.has_value());
  CHECK(traj.last->t == 0.0);
}

TEST_CASE("snapshot and CSV round trips", "[solver][io]") {
  Grid g(16, 2.5, 0.5);
  std::mt19937_64 gen(11);
  FlowState s(1.75, random_velocity(g, gen, 0.3, 3), smooth_density(g, gen, 0.2, 3));
  const auto path = (std::filesystem::temp_directory_path() / "insdecay_snap_test.bin").string();
  io::write_snapshot(path, s);
  FlowState r = io::read_snapshot(path);
  std::filesystem::remove(path);
  CHECK(r.t == s.t);
  CHECK(r.grid() == s.grid());
  CHECK(rel_l2(r.u.vec(), s.u.vec()) == 0.0);
  CHECK(r.rho.nodal() == s.rho.nodal());
  auto bytes = io::encode_snapshot(s);
  CHECK(std::string(bytes.begin(), bytes.begin() + 8) == "INSSNAP1");
  CHECK(bytes.size() == 56 + g.size() * 40);
  bytes[0] = 'X';
  CHECK_THROWS_AS(io::decode_snapshot(bytes, "mem"), Error);

  Diagnostics d;
  d.t = 0.1;
  d.l2_u = 1.0 / 3.0;
  d.energy = 1e-300;
  std::stringstream ss;
  io::write_table(ss, io::diagnostics_table({d, d}));
  auto t = io::read_table(ss);
  CHECK(t.columns.size() == 9);
  CHECK(t.values("l2_u")[1] == 1.0 / 3.0);
  CHECK(t.values("energy")[0] == 1e-300);
}
