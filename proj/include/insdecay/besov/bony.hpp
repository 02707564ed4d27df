#pragma once

#include "insdecay/besov/littlewood_paley.hpp"

namespace insdecay {

struct BonyParts {
  SpectralField t_ab;  // T_a b = sum_j S_{j-1} a Delta_j b
  SpectralField t_ba;  // T_b a
  SpectralField r_ab;  // R(a, b) = sum_j Delta_j a Delta~_j b

  SpectralField sum() const { return t_ab + t_ba + r_ab; }
};

namespace detail {

/// sum_j x_j * y_j over nodal block fields, accumulated in place.
inline void accumulate_product(NodalField& acc, const NodalField& x, const NodalField& y) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += x[i] * y[i];
}

/// Nodal blocks j = -1..j_max of one field. Blocks are paired within the
/// field so that rounding never mixes fields of different scale.
inline std::vector<NodalField> nodal_blocks(const SpectralField& f) {
  const int jm = j_max(f.grid());
  std::vector<NodalField> out;
  out.reserve(jm + 2);
  for (int j = -1; j <= jm; j += 2) {
    if (j + 1 <= jm) {
      auto [x, y] = to_physical(dyadic_block(f, j), dyadic_block(f, j + 1));
      out.push_back(std::move(x));
      out.push_back(std::move(y));
    } else {
      out.push_back(to_physical(dyadic_block(f, j)));
    }
  }
  return out;
}

}  // namespace detail

/// Paraproduct split of a b. Each part is summed nodally and transformed
/// once, then dealiased, so parts add up to the dealiased nodal product.
inline BonyParts bony_decompose(const SpectralField& a, const SpectralField& b) {
  const Grid& g = a.grid();
  require_same_grid(g, b.grid(), "bony_decompose");
  const int jm = j_max(g);

  const auto da = detail::nodal_blocks(a);
  const auto db = detail::nodal_blocks(b);
  // Nodal S_{j-1} by running sums of blocks: S_{j-1} = sum_{k <= j-2} Delta_k.
  NodalField run_a(g.size(), 0.0), run_b(g.size(), 0.0);
  NodalField tab(g.size(), 0.0), tba(g.size(), 0.0), rab(g.size(), 0.0);
  for (int j = -1; j <= jm; ++j) {
    const int i = j + 1;
    if (i >= 2) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        run_a[k] += da[i - 2][k];
        run_b[k] += db[i - 2][k];
      }
    }
    detail::accumulate_product(tab, run_a, db[i]);
    detail::accumulate_product(tba, run_b, da[i]);
    for (int k = std::max(-1, j - 1); k <= std::min(jm, j + 1); ++k) {
      detail::accumulate_product(rab, da[i], db[k + 1]);
    }
  }
  auto [ft_ab, ft_ba] = to_spectral(tab, tba, g);
  return BonyParts{dealias(std::move(ft_ab)), dealias(std::move(ft_ba)),
                   dealias(to_spectral(rab, g))};
}

}  // namespace insdecay
