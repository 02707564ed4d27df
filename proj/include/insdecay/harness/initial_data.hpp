#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "insdecay/rng.hpp"
#include "insdecay/solver/flow_state.hpp"

namespace insdecay {

/// Radial modulus of u_hat near the origin.
struct SpectralProfile {
  enum class Kind { flat_disk, power };
  Kind kind = Kind::flat_disk;
  double k_c = 1.0;    // disk radius
  double sigma = 0.0;  // power exponent in (-1, 0), power kind only

  static SpectralProfile flat_disk(double k_c) { return {Kind::flat_disk, k_c, 0.0}; }
  static SpectralProfile power(double sigma, double k_c) { return {Kind::power, k_c, sigma}; }

  /// Exponent sigma that realizes L^p behaviour at the origin: 2/p - 2.
  static double sigma_for(double p) { return 2.0 / p - 2.0; }

  /// p for which the profile reproduces the L^p heat-decay rate 2/p - 1.
  double effective_p() const { return kind == Kind::flat_disk ? 1.0 : 2.0 / (2.0 + sigma); }

  /// Expected exponent of ||e^{t Delta} u0||^2: 2 beta(p_eff) = 1 + sigma.
  double expected_exponent() const { return kind == Kind::flat_disk ? 1.0 : 1.0 + sigma; }
};

enum class Regularity { h1, h_alpha };

struct InitialDataSpec {
  double target_p = 1.5;
  Regularity regularity = Regularity::h1;
  double alpha = 0.5;  // H^alpha tail exponent, h_alpha only
  double amplitude = 1.0;
  SpectralProfile profile;
  std::uint64_t seed = 1;
};

/// beta(p) = (2/p - 1) / 2
inline double beta_of(double p) { return 0.5 * (2.0 / p - 1.0); }

inline void validate(const InitialDataSpec& s, const Grid& g) {
  if (!(s.target_p > 1.0 && s.target_p < 2.0)) {
    throw DomainError("initial data: target_p must lie in (1, 2)");
  }
  if (s.regularity == Regularity::h_alpha && !(s.alpha > 0.0 && s.alpha < 1.0)) {
    throw DomainError("initial data: alpha must lie in (0, 1)");
  }
  if (!(s.amplitude >= 0.0)) throw DomainError("initial data: amplitude must be >= 0");
  if (s.profile.kind == SpectralProfile::Kind::power &&
      !(s.profile.sigma > -1.0 && s.profile.sigma < 0.0)) {
    throw DomainError("initial data: power profile needs sigma in (-1, 0)");
  }
  const double k_cut = g.k0() * g.dealias_cutoff();
  if (!(s.profile.k_c >= g.k0())) {
    throw DomainError("initial data: k_c = " + std::to_string(s.profile.k_c) +
                      " is below the lowest box wavenumber " + std::to_string(g.k0()));
  }
  if (s.profile.k_c > k_cut) {
    throw DomainError("initial data: k_c = " + std::to_string(s.profile.k_c) +
                      " exceeds the dealiased band " + std::to_string(k_cut));
  }
}

/// |u_hat(xi)| / amplitude for the spec at radius k > 0.
inline double profile_modulus(const InitialDataSpec& s, double k) {
  const double kc = s.profile.k_c;
  if (k <= kc) {
    return s.profile.kind == SpectralProfile::Kind::flat_disk ? 1.0
                                                              : std::pow(k / kc, s.profile.sigma);
  }
  if (s.regularity == Regularity::h_alpha) return std::pow(k / kc, -(3.0 + s.alpha) / 2.0);
  return 0.0;
}

namespace detail {

/// Counter for the mode (mx, my), independent of the grid size so that
/// refined grids reproduce the same phases.
inline std::uint64_t mode_counter(int mx, int my) {
  const auto a = static_cast<std::uint64_t>(mx + (1 << 20));
  const auto b = static_cast<std::uint64_t>(my + (1 << 20));
  return (a << 21) | b;
}

/// True for the representative of each (k, -k) pair.
inline bool canonical(int mx, int my) { return my > 0 || (my == 0 && mx > 0); }

}  // namespace detail

/// u0 = grad^perp psi with random phases; |u_hat(xi)| = amplitude * profile.
/// Modes outside the dealiasing mask are left empty.
inline VelocityField gen_initial_velocity(const InitialDataSpec& s, const Grid& g) {
  validate(s, g);
  SpectralField psi(g);
  if (s.amplitude == 0.0) return velocity_from_stream(psi);
  const CounterRng rng(s.seed, "velocity-phase");
  // |c_k| = (2 pi / l^2) |u_hat(xi_k)|
  const double coeff = 2.0 * std::numbers::pi / g.area() * s.amplitude;
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.n(); ++ix) {
      if (!g.keeps(ix, iy)) continue;
      const int mx = g.mode(ix), my = g.mode(iy);
      if (!detail::canonical(mx, my)) continue;
      const double k = g.k_norm(ix, iy);
      const double m = profile_modulus(s, k);
      if (m == 0.0) continue;
      const cplx c = std::polar(coeff * m / k, rng.phase(detail::mode_counter(mx, my)));
      psi(ix, iy) = c;
      psi[g.conjugate_index(ix, iy)] = std::conj(c);
    }
  }
  return velocity_from_stream(psi);
}

/// Norms of the generated data that enter the estimates.
struct InitialDataReport {
  double p = 0.0;
  double lp = 0.0;          // ||u0||_{L^p}
  double fourier_lq = 0.0;  // ||u0_hat||_{L^{p'}}
  double fourier_sup = 0.0; // ||u0_hat||_{L^inf}
  double l2 = 0.0;
  double h1 = 0.0;
  double h_alpha = 0.0;
  double alpha = 0.0;
};

inline InitialDataReport report_initial_data(const VelocityField& u, const InitialDataSpec& s) {
  InitialDataReport r;
  r.p = s.target_p;
  r.alpha = s.alpha;
  r.lp = lp_norm(u, s.target_p);
  r.fourier_lq = fourier_lq_norm(u.vec(), s.target_p / (s.target_p - 1.0));
  r.fourier_sup = fourier_lq_norm(u.vec(), kInf);
  r.l2 = l2_norm(u);
  r.h1 = sobolev_norm(u, 1.0);
  r.h_alpha = sobolev_norm(u, s.alpha);
  return r;
}

struct DensitySpec {
  double contrast = 0.05;  // max |rho0 - 1|
  double k_rho = 1.0;      // band of the perturbation
  std::uint64_t seed = 1;
};

/// rho0 = 1 + band-limited random-phase perturbation with mean zero and
/// max |rho0 - 1| = contrast.
inline DensityField gen_initial_density(const DensitySpec& s, const Grid& g) {
  if (!(s.contrast >= 0.0 && s.contrast < 1.0)) {
    throw DomainError("initial density: contrast must lie in [0, 1)");
  }
  if (s.contrast == 0.0) return DensityField::constant(g, 1.0);
  if (!(s.k_rho >= g.k0())) {
    throw DomainError("initial density: k_rho is below the lowest box wavenumber");
  }
  const CounterRng rng(s.seed, "density-phase");
  SpectralField f(g);
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.n(); ++ix) {
      if (!g.keeps(ix, iy)) continue;
      const int mx = g.mode(ix), my = g.mode(iy);
      if (!detail::canonical(mx, my) || g.k_norm(ix, iy) > s.k_rho) continue;
      const cplx c = std::polar(1.0, rng.phase(detail::mode_counter(mx, my)));
      f(ix, iy) = c;
      f[g.conjugate_index(ix, iy)] = std::conj(c);
    }
  }
  NodalField v = to_physical(f);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double peak = 0.0;
  for (auto& x : v) {
    x -= mean;
    peak = std::max(peak, std::abs(x));
  }
  for (auto& x : v) x = 1.0 + s.contrast * x / peak;
  return DensityField(g, std::move(v));
}

}  // namespace insdecay
