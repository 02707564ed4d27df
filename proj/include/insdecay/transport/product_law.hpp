#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "insdecay/besov/besov_norm.hpp"
#include "insdecay/besov/bony.hpp"
#include "insdecay/rng.hpp"

namespace insdecay {

struct ProductLawResult {
  double ratio = 0.0;    // ||ab||_{B^0_{inf,2}} / (||a||_{eta ln} ||b||_{B^0_{inf,2}})
  double ab_norm = 0.0;  // ||ab||_{B^0_{inf,2}}
  double a_norm = 0.0;   // ||a||_{B^{eta ln}_{inf,1}}
  double b_norm = 0.0;   // ||b||_{B^0_{inf,2}}
  double ratio_t_ab = 0.0;  // same ratio with T_a b in the numerator
  double ratio_t_ba = 0.0;
  double ratio_r_ab = 0.0;
  double eta = 0.0;
  bool hypothesis_holds = true;  // eta > 1
};

inline BesovSpec b0_inf2() { return BesovSpec::classical(0.0, kInf, 2.0); }

/// Product law ratio, with the product formed from its three paraproduct
/// parts. eta <= 1 is evaluated but flagged.
inline ProductLawResult product_law_check(const SpectralField& a, const SpectralField& b,
                                          double eta) {
  if (!(eta > 0.0)) throw DomainError("product_law_check: eta must be > 0");
  require_same_grid(a.grid(), b.grid(), "product_law_check");
  ProductLawResult r;
  r.eta = eta;
  r.hypothesis_holds = eta > 1.0;
  const BesovSpec b0 = b0_inf2();
  r.a_norm = log_besov_norm(a, eta);
  r.b_norm = besov_norm(b, b0);
  const double den = r.a_norm * r.b_norm;
  if (den == 0.0) return r;
  const BonyParts parts = bony_decompose(a, b);
  r.ab_norm = besov_norm(parts.sum(), b0);
  r.ratio = r.ab_norm / den;
  r.ratio_t_ab = besov_norm(parts.t_ab, b0) / den;
  r.ratio_t_ba = besov_norm(parts.t_ba, b0) / den;
  r.ratio_r_ab = besov_norm(parts.r_ab, b0) / den;
  return r;
}

/// Band-limited test field defined by physical wavenumbers, so the same
/// (seed, sample) gives the same function on every grid that resolves it.
/// Kinds alternate between random-phase power spectra and low-passed sums
/// of impulses.
inline SpectralField product_law_field(const Grid& g, std::uint64_t seed, std::uint64_t sample,
                                       double k_band) {
  const CounterRng rng(seed, "product-law");
  const std::uint64_t base = sample * 64;
  SpectralField f(g);
  const bool impulses = rng.uniform(base) < 0.5;
  if (impulses) {
    const int count = 1 + static_cast<int>(rng.uniform(base + 1) * 4.0);
    for (int c = 0; c < count; ++c) {
      const double x0 = rng.uniform(base + 2 + 3 * c, 0.0, g.l());
      const double y0 = rng.uniform(base + 3 + 3 * c, 0.0, g.l());
      const double w = rng.uniform(base + 4 + 3 * c, -1.0, 1.0);
      for (int iy = 0; iy < g.n(); ++iy) {
        for (int ix = 0; ix < g.n(); ++ix) {
          if (g.is_nyquist(ix) || g.is_nyquist(iy)) continue;
          const double ph = -(g.wavenumber(ix) * x0 + g.wavenumber(iy) * y0);
          f(ix, iy) += w * std::polar(1.0, ph);
        }
      }
    }
    // chi(r / (0.75 k_band)) vanishes beyond k_band.
    return apply_multiplier(
        f, [&](double kx, double ky) { return lp::chi(std::hypot(kx, ky) / (0.75 * k_band)); });
  }
  const double slope = rng.uniform(base + 1, 0.0, 2.0);
  const double mean = rng.uniform(base + 2, -1.0, 1.0);
  const CounterRng modes(seed ^ (sample * 0x9e3779b97f4a7c15ULL), "product-law-modes");
  for (int iy = 0; iy < g.n(); ++iy) {
    for (int ix = 0; ix < g.n(); ++ix) {
      const int mx = g.mode(ix), my = g.mode(iy);
      if (!(my > 0 || (my == 0 && mx > 0))) continue;
      const double k = g.k_norm(ix, iy);
      if (k > k_band || g.is_nyquist(ix) || g.is_nyquist(iy)) continue;
      const std::uint64_t id =
          (static_cast<std::uint64_t>(mx + (1 << 20)) << 21) | static_cast<std::uint64_t>(my + (1 << 20));
      const cplx c = std::polar(modes.normal(id) * std::pow(k, -slope), modes.phase(id + (1ULL << 50)));
      f(ix, iy) = c;
      f[g.conjugate_index(ix, iy)] = std::conj(c);
    }
  }
  // Mean set against the coefficient l^2 norm, which is the same on every grid.
  double c2 = 0.0;
  for (const cplx& c : f.coeffs()) c2 += std::norm(c);
  f[0] = mean * std::sqrt(c2);
  return f;
}

struct ProductLawEnsembleRow {
  double eta = 0.0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  int argmax = -1;
};

/// Max ratio over `count` pairs (a, b) of product_law_field samples, for each
/// eta. The product and ||b|| do not depend on eta and are formed once per pair.
inline std::vector<ProductLawEnsembleRow> product_law_ensemble(const Grid& g, int count,
                                                               const std::vector<double>& etas,
                                                               std::uint64_t seed, double k_band) {
  if (2.0 * k_band > g.k0() * g.dealias_cutoff()) {
    throw DomainError("product_law_ensemble: products of the band exceed the dealiased range");
  }
  std::vector<ProductLawEnsembleRow> rows;
  for (double eta : etas) {
    if (!(eta > 0.0)) throw DomainError("product_law_ensemble: eta must be > 0");
    rows.push_back({eta, 0.0, 0.0, -1});
  }
  const BesovSpec b0 = b0_inf2();
  for (int s = 0; s < count; ++s) {
    const SpectralField a = product_law_field(g, seed, 2 * static_cast<std::uint64_t>(s), k_band);
    const SpectralField b =
        product_law_field(g, seed, 2 * static_cast<std::uint64_t>(s) + 1, k_band);
    const double bn = besov_norm(b, b0);
    const auto a_blocks = block_norms(a, kInf);
    if (bn == 0.0) continue;
    const double ab = besov_norm(bony_decompose(a, b).sum(), b0);
    for (auto& row : rows) {
      const double an = besov_norm_from_blocks(a_blocks, BesovSpec::logarithmic(row.eta));
      const double r = an > 0.0 ? ab / (an * bn) : 0.0;
      row.mean_ratio += r / count;
      if (r > row.max_ratio) {
        row.max_ratio = r;
        row.argmax = s;
      }
    }
  }
  return rows;
}

}  // namespace insdecay
