#include <catch_amalgamated.hpp>

#include <numbers>

#include "insdecay/spectral/norms.hpp"
#include "test_support.hpp"

using namespace insdecay;
using Catch::Approx;
using testing::random_field;
using testing::random_vector;
using testing::rel_l2;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("grid validates its parameters", "[spectral]") {
  CHECK_THROWS_AS(Grid(6, 1.0), DomainError);
  CHECK_THROWS_AS(Grid(9, 1.0), DomainError);
  CHECK_THROWS_AS(Grid(16, 0.0), DomainError);
  CHECK_THROWS_AS(Grid(16, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(Grid(16, 1.0, 1.5), DomainError);
  Grid g(16, 2.0 * kPi);
  CHECK(g.k0() == Approx(1.0));
  CHECK(g.mode(7) == 7);
  CHECK(g.mode(8) == -8);
  CHECK(g.mode(15) == -1);
  CHECK(g.dealias_cutoff() == 5);
  CHECK(g.keeps(5, 0));
  CHECK_FALSE(g.keeps(6, 0));
  CHECK_FALSE(g.keeps(8, 0));
}

TEST_CASE("transform of a constant is the mean mode", "[spectral]") {
  Grid g(16, 3.0);
  NodalField c(g.size(), 2.5);
  SpectralField f = to_spectral(c, g);
  CHECK(f[0].real() == Approx(2.5).epsilon(1e-14));
  double rest = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) rest = std::max(rest, std::abs(f[i]));
  CHECK(rest < 1e-15);
}

TEST_CASE("single cosine maps to two conjugate half-amplitude modes", "[spectral]") {
  Grid g(32, 5.0);
  auto v = sample(g, [&](double x, double) { return std::cos(2.0 * kPi * x / g.l()); });
  SpectralField f = to_spectral(v, g);
  CHECK(std::abs(f.at_mode(1, 0) - cplx(0.5, 0.0)) < 1e-14);
  CHECK(std::abs(f.at_mode(-1, 0) - cplx(0.5, 0.0)) < 1e-14);
  double rest = 0.0;
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.n(); ++ix) {
      if (iy == 0 && (ix == 1 || ix == g.n() - 1)) continue;
      rest = std::max(rest, std::abs(f(ix, iy)));
    }
  }
  CHECK(rest < 1e-15);
}

TEST_CASE("round trip and Hermitian symmetry", "[spectral]") {
  Grid g(64, 1.7);
  std::mt19937_64 gen(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 5; ++trial) {
    NodalField v(g.size());
    for (auto& x : v) x = nd(gen);
    SpectralField f = to_spectral(v, g);
    CHECK(f.hermitian_defect() < 1e-12);
    CHECK(testing::rel_max(to_physical(f), v) < 1e-12);

    NodalField w(g.size());
    for (auto& x : w) x = nd(gen);
    auto [fa, fb] = to_spectral(v, w, g);
    CHECK(rel_l2(fa, f) < 1e-13);
    CHECK(rel_l2(fb, to_spectral(w, g)) < 1e-13);
    auto [pa, pb] = to_physical(fa, fb);
    CHECK(testing::rel_max(pa, v) < 1e-12);
    CHECK(testing::rel_max(pb, w) < 1e-12);
  }
}

TEST_CASE("shape mismatch is reported", "[spectral]") {
  Grid g(16, 1.0);
  NodalField bad(10, 0.0);
  CHECK_THROWS_AS(to_spectral(bad, g), ShapeMismatch);
  CHECK_THROWS_AS(SpectralField(g, std::vector<cplx>(3)), ShapeMismatch);
  SpectralField a(g), b(Grid(32, 1.0));
  CHECK_THROWS_AS(a += b, ShapeMismatch);
}

TEST_CASE("gradient of simple fields", "[spectral]") {
  Grid g(32, 3.0);
  SpectralField c = to_spectral(NodalField(g.size(), 4.0), g);
  auto gc = gradient(c);
  CHECK(l2_norm(gc.x) < 1e-14);
  CHECK(l2_norm(gc.y) < 1e-14);

  auto s = to_spectral(sample(g, [&](double x, double) { return std::sin(2 * kPi * x / g.l()); }),
                       g);
  auto gs = gradient(s);
  auto expect = sample(
      g, [&](double x, double) { return (2 * kPi / g.l()) * std::cos(2 * kPi * x / g.l()); });
  CHECK(testing::rel_max(to_physical(gs.x), expect) < 1e-13);
  CHECK(l2_norm(gs.y) < 1e-14);
}

TEST_CASE("gradient matches an 8th-order centered difference oracle", "[spectral]") {
  Grid g(256, 4.0);
  std::mt19937_64 gen(3);
  SpectralField f = random_field(g, gen, 12);
  NodalField v = to_physical(f);
  const int n = g.n();
  const double h = g.dx();
  const double w[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  NodalField fx(g.size()), fy(g.size());
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      double dx = 0.0, dy = 0.0;
      for (int s = 1; s <= 4; ++s) {
        dx += w[s - 1] * (v[g.index((ix + s) % n, iy)] - v[g.index((ix - s + n) % n, iy)]);
        dy += w[s - 1] * (v[g.index(ix, (iy + s) % n)] - v[g.index(ix, (iy - s + n) % n)]);
      }
      fx[g.index(ix, iy)] = dx / h;
      fy[g.index(ix, iy)] = dy / h;
    }
  }
  auto gr = gradient(f);
  CHECK(rel_l2(gr.x, to_spectral(fx, g)) < 1e-6);
  CHECK(rel_l2(gr.y, to_spectral(fy, g)) < 1e-6);
}

TEST_CASE("Leray projector algebra", "[spectral]") {
  Grid g(64, 2.3);
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 5; ++trial) {
    SpectralVector v = random_vector(g, gen);
    VelocityField pv = leray_project(v);
    SpectralVector qv = gradient_part(v);

    CHECK(divergence_ratio(pv.vec()) < 1e-12);
    CHECK(rel_l2(leray_project(pv.vec()).vec(), pv.vec()) < 1e-12);
    CHECK(rel_l2(pv.vec() + qv, v) < 1e-12);
    CHECK(l2_norm(leray_project(qv).vec()) <= 1e-12 * l2_norm(v));
    CHECK(l2_norm(gradient_part(pv.vec())) <= 1e-12 * l2_norm(v));

    SpectralField q = random_field(g, gen);
    VelocityField pg = leray_project(gradient(q));
    CHECK(l2_norm(pg.vec()) <= 1e-12 * l2_norm_gradient(SpectralVector(q, q)));
    CHECK(l2_norm_gradient(pg.vec()) <= 1e-12 * l2_norm_gradient(gradient(q)));
  }
}

TEST_CASE("Leray projector passes the mean through", "[spectral]") {
  Grid g(16, 1.0);
  SpectralVector v(g);
  v.x[0] = 0.7;
  v.y[0] = -0.2;
  VelocityField p = leray_project(v);
  CHECK(p.u1()[0] == cplx(0.7, 0.0));
  CHECK(p.u2()[0] == cplx(-0.2, 0.0));
}

TEST_CASE("Riesz transforms", "[spectral]") {
  Grid g(32, 2 * kPi);
  SpectralField m = testing::cosine_mode(g, 1, 0, 1.0);
  SpectralField r1 = riesz(m, 1);
  CHECK(std::abs(std::abs(r1.at_mode(1, 0)) - 0.5) < 1e-15);
  CHECK(l2_norm(riesz(m, 2)) < 1e-15);

  Grid g2(128, 3.1);
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 3; ++trial) {
    SpectralField f = random_field(g2, gen);
    f[0] = 0.0;
    SpectralField s = riesz(riesz(f, 1), 1) + riesz(riesz(f, 2), 2);
    s += f;
    CHECK(l2_norm(s) <= 1e-12 * l2_norm(f));

    SpectralField d = riesz(f, 1);
    SpectralField brute(g2);
    for (int iy = 0; iy < g2.n(); ++iy) {
      for (int ix = 0; ix < g2.n(); ++ix) {
        const double kx = 2 * kPi / g2.l() * g2.mode(ix);
        const double ky = 2 * kPi / g2.l() * g2.mode(iy);
        const double k = std::sqrt(kx * kx + ky * ky);
        if (k > 0 && ix != g2.n() / 2) brute(ix, iy) = cplx(0, kx / k) * f(ix, iy);
      }
    }
    CHECK(rel_l2(d, brute) < 1e-14);
  }
}

TEST_CASE("Lebesgue and Sobolev norms", "[spectral]") {
  Grid g(32, 3.0);
  SpectralField c = to_spectral(NodalField(g.size(), -2.0), g);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    CHECK(lp_norm(c, p) == Approx(2.0 * std::pow(g.l(), 2.0 / p)).epsilon(1e-13));
  }
  CHECK(lp_norm(c, kInf) == Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(lp_norm(c, 0.5), DomainError);

  SpectralField m = testing::cosine_mode(g, 2, 1, 1.3);
  const double k2 = std::pow(2 * kPi / g.l(), 2) * 5.0;
  const double l2 = l2_norm(m);
  for (double s : {-0.5, 0.0, 1.0, 2.5}) {
    CHECK(sobolev_norm(m, s) == Approx(std::pow(1 + k2, s / 2) * l2).epsilon(1e-13));
  }

  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 5; ++trial) {
    SpectralField f = random_field(g, gen);
    CHECK(lp_norm(f, 2.0) == Approx(l2_norm(f)).epsilon(1e-10));
  }
}

TEST_CASE("stream function velocities are divergence free", "[spectral]") {
  Grid g(64, 10.0);
  std::mt19937_64 gen(29);
  SpectralField psi = random_field(g, gen, 20);
  VelocityField u = velocity_from_stream(psi);
  CHECK(divergence_ratio(u.vec()) < 1e-12);
}
