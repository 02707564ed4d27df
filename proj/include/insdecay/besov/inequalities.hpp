#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "insdecay/besov/littlewood_paley.hpp"
#include "insdecay/rng.hpp"
#include "insdecay/spectral/norms.hpp"

namespace insdecay {

struct MultiIndex {
  int ax = 0;
  int ay = 0;
  int order() const noexcept { return ax + ay; }
};

/// d^ax/dx^ax d^ay/dy^ay f.
inline SpectralField partial(const SpectralField& f, MultiIndex alpha) {
  SpectralField out = f;
  for (int i = 0; i < alpha.ax; ++i) out = derivative(out, 1);
  for (int i = 0; i < alpha.ay; ++i) out = derivative(out, 2);
  return out;
}

/// ||d^alpha f||_{L^q} / (2^{j|alpha| + 2j(1/p - 1/q)} ||f||_{L^p}); 0 for f = 0.
inline double verify_bernstein(const SpectralField& f, int j, double p, double q,
                               MultiIndex alpha) {
  require_lebesgue_exponent(p, "verify_bernstein");
  require_lebesgue_exponent(q, "verify_bernstein");
  if (p > q) throw DomainError("verify_bernstein: needs p <= q");
  if (alpha.ax < 0 || alpha.ay < 0) throw DomainError("verify_bernstein: negative order");
  const double base = lp_norm(f, p);
  if (base == 0.0) return 0.0;
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  const double scale = std::exp2(j * alpha.order() + 2.0 * j * (inv_p - inv_q));
  return lp_norm(partial(f, alpha), q) / (scale * base);
}

/// ||e^{t Delta} g||_{L^p} / ||g||_{L^p} with g = phi(D / lambda) f; 0 when g = 0.
inline double heat_block_decay(const SpectralField& f, double lambda, double t, double p = 2.0) {
  if (!(t >= 0.0)) throw DomainError("heat_block_decay: t must be >= 0");
  if (!(lambda > 0.0)) throw DomainError("heat_block_decay: lambda must be > 0");
  const Grid& g = f.grid();
  SpectralField blk = apply_indexed_multiplier(
      f, [&](int ix, int iy) { return lp::phi(g.k_norm(ix, iy) / lambda); });
  const double base = lp_norm(blk, p);
  if (base == 0.0) return 0.0;
  return lp_norm(heat(blk, t), p) / base;
}

/// (lower, upper) = (e^{-t (8 lambda/3)^2}, e^{-t (3 lambda/4)^2}) for p = 2.
inline std::pair<double, double> heat_block_bracket(double lambda, double t) {
  const double lo = 8.0 * lambda / 3.0, hi = 3.0 * lambda / 4.0;
  return {std::exp(-t * lo * lo), std::exp(-t * hi * hi)};
}

/// Spatially localized block field Delta_j (sum of 1..4 random impulses).
/// Impulse locations and weights come from the counter generator.
inline SpectralField localized_block_field(const Grid& g, int j, const CounterRng& rng,
                                           std::uint64_t sample) {
  const std::uint64_t base = sample * 16;
  const int count = 1 + static_cast<int>(rng.uniform(base) * 4.0);
  SpectralField f(g);
  for (int c = 0; c < count; ++c) {
    const double x0 = rng.uniform(base + 1 + 3 * c, 0.0, g.l());
    const double y0 = rng.uniform(base + 2 + 3 * c, 0.0, g.l());
    const double w = rng.uniform(base + 3 + 3 * c, -1.0, 1.0);
    std::vector<cplx> ex(g.n()), ey(g.n());
    for (int i = 0; i < g.n(); ++i) {
      ex[i] = g.is_nyquist(i) ? 0.0 : std::polar(1.0, -g.wavenumber(i) * x0);
      ey[i] = g.is_nyquist(i) ? 0.0 : w * std::polar(1.0, -g.wavenumber(i) * y0);
    }
    for (int iy = 0; iy < g.n(); ++iy) {
      for (int ix = 0; ix < g.n(); ++ix) f(ix, iy) += ex[ix] * ey[iy];
    }
  }
  return dyadic_block(f, j);
}

struct BernsteinEnsembleRow {
  int j;
  double max_ratio;
};

/// Max Bernstein ratio over `count` localized block fields for each j.
inline std::vector<BernsteinEnsembleRow> bernstein_ensemble(const Grid& g, int j_lo, int j_hi,
                                                            int count, std::uint64_t seed,
                                                            double p, double q,
                                                            MultiIndex alpha) {
  CounterRng rng(seed, "bernstein");
  std::vector<BernsteinEnsembleRow> rows;
  for (int j = j_lo; j <= j_hi; ++j) {
    double worst = 0.0;
    for (int s = 0; s < count; ++s) {
      const auto f = localized_block_field(g, j, rng, static_cast<std::uint64_t>(j) * 100000 + s);
      worst = std::max(worst, verify_bernstein(f, j, p, q, alpha));
    }
    rows.push_back({j, worst});
  }
  return rows;
}

}  // namespace insdecay
