#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "insdecay/spectral/field.hpp"
#include "insdecay/spectral/operators.hpp"

namespace insdecay {

namespace lp {

inline constexpr double kInner = 3.0 / 4.0;  // chi == 1 below this radius
inline constexpr double kOuter = 4.0 / 3.0;  // chi == 0 above this radius

/// C-infinity step: 0 for x <= 0, 1 for x >= 1.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

/// Radial low-pass profile: 1 on |xi| <= 3/4, 0 on |xi| >= 4/3.
inline double chi(double r) { return 1.0 - smooth_step((r - kInner) / (kOuter - kInner)); }

/// Annulus profile phi(xi) = chi(xi / 2) - chi(xi), supported in 3/4 <= |xi| <= 8/3.
/// The telescoping form makes chi + sum_j phi(2^-j .) = 1 hold exactly.
inline double phi(double r) { return chi(0.5 * r) - chi(r); }

/// Multiplier of Delta_j at radius r.
inline double block_multiplier(int j, double r) {
  if (j == -1) return chi(r);
  return phi(std::ldexp(r, -j));
}

/// Multiplier of S_j = sum_{k <= j-1} Delta_k; zero for j <= -1.
inline double low_pass_multiplier(int j, double r) {
  if (j <= -1) return 0.0;
  return chi(std::ldexp(r, -j));
}

}  // namespace lp

/// Last block index on this grid: ceil(log2 k_max) + 1. Block j_max itself is
/// identically zero, so blocks -1..j_max reconstruct every field.
inline int j_max(const Grid& g) {
  return std::max(0, static_cast<int>(std::ceil(std::log2(g.k_max()))) + 1);
}

inline void require_block_index(const Grid& g, int j, const char* where) {
  if (j < -1 || j > j_max(g)) {
    throw DomainError(std::string(where) + ": block index " + std::to_string(j) +
                      " outside [-1, " + std::to_string(j_max(g)) + "]");
  }
}

/// Delta_j f.
inline SpectralField dyadic_block(const SpectralField& f, int j) {
  const Grid& g = f.grid();
  require_block_index(g, j, "dyadic_block");
  return apply_indexed_multiplier(
      f, [&](int ix, int iy) { return lp::block_multiplier(j, g.k_norm(ix, iy)); });
}

/// S_j f; zero for j <= -1 and the identity once j exceeds j_max.
inline SpectralField low_pass(const SpectralField& f, int j) {
  const Grid& g = f.grid();
  if (j <= -1) return SpectralField(g);
  if (j > j_max(g)) return f;
  return apply_indexed_multiplier(
      f, [&](int ix, int iy) { return lp::low_pass_multiplier(j, g.k_norm(ix, iy)); });
}

/// Delta~_j = Delta_{j-1} + Delta_j + Delta_{j+1}.
inline double widened_block_multiplier(int j, double r) {
  double m = 0.0;
  for (int i = j - 1; i <= j + 1; ++i) {
    if (i >= -1) m += lp::block_multiplier(i, r);
  }
  return m;
}

/// All blocks Delta_j f for j = -1..j_max, immutable after construction.
class DyadicDecomposition {
 public:
  explicit DyadicDecomposition(const SpectralField& f) : grid_(f.grid()), j_max_(insdecay::j_max(f.grid())) {
    blocks_.reserve(j_max_ + 2);
    for (int j = -1; j <= j_max_; ++j) blocks_.push_back(dyadic_block(f, j));
  }

  const Grid& grid() const noexcept { return grid_; }
  int j_max() const noexcept { return j_max_; }
  int count() const noexcept { return static_cast<int>(blocks_.size()); }

  const SpectralField& block(int j) const {
    insdecay::require_block_index(grid_, j, "DyadicDecomposition::block");
    return blocks_[j + 1];
  }

  /// Sum of all blocks.
  SpectralField reconstruct() const {
    SpectralField out(grid_);
    for (const auto& b : blocks_) out += b;
    return out;
  }

 private:
  Grid grid_;
  int j_max_;
  std::vector<SpectralField> blocks_;
};

}  // namespace insdecay
