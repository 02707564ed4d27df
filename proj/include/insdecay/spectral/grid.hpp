#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "insdecay/error.hpp"

namespace insdecay {

/// Uniform n x n periodic grid on [0, l)^2.
///
/// Storage convention shared by every field in the library: index
/// `iy * n + ix`, axis 1 is x (fastest), axis 2 is y. Integer mode numbers
/// follow the FFT ordering, m = i for i < n/2 and m = i - n otherwise, so
/// they cover [-n/2, n/2). The physical wavenumber is (2 pi / l) m.
class Grid {
 public:
  Grid(int n, double l, double dealias_fraction = 2.0 / 3.0)
      : n_(n), l_(l), dealias_fraction_(dealias_fraction) {
    if (n < 8 || n % 2 != 0) {
      throw DomainError("Grid: n must be even and >= 8, got " + std::to_string(n));
    }
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw DomainError("Grid: box side must be positive");
    }
    if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0) {
      throw DomainError("Grid: dealias fraction must lie in (0, 1]");
    }
  }

  int n() const noexcept { return n_; }
  double l() const noexcept { return l_; }
  double dealias_fraction() const noexcept { return dealias_fraction_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }

  /// Smallest nonzero wavenumber 2 pi / l.
  double k0() const noexcept { return 2.0 * std::numbers::pi / l_; }
  double dx() const noexcept { return l_ / n_; }
  double cell_area() const noexcept { return dx() * dx(); }
  double area() const noexcept { return l_ * l_; }

  int mode(int i) const noexcept { return i < n_ / 2 ? i : i - n_; }
  double wavenumber(int i) const noexcept { return k0() * mode(i); }
  bool is_nyquist(int i) const noexcept { return i == n_ / 2; }

  double k_squared(int ix, int iy) const noexcept {
    const double kx = wavenumber(ix);
    const double ky = wavenumber(iy);
    return kx * kx + ky * ky;
  }
  double k_norm(int ix, int iy) const noexcept { return std::sqrt(k_squared(ix, iy)); }

  /// Largest |xi| represented on the grid (the corner mode).
  double k_max() const noexcept { return std::sqrt(2.0) * k0() * (n_ / 2); }

  /// Largest integer mode kept by the dealiasing mask.
  int dealias_cutoff() const noexcept {
    return static_cast<int>(std::floor(dealias_fraction_ * (n_ / 2) + 1e-12));
  }

  /// True when mode (ix, iy) survives the dealiasing mask |m_i| <= fraction * n / 2.
  bool keeps(int ix, int iy) const noexcept {
    const int c = dealias_cutoff();
    return std::abs(mode(ix)) <= c && std::abs(mode(iy)) <= c && !is_nyquist(ix) &&
           !is_nyquist(iy);
  }

  double x(int ix) const noexcept { return dx() * ix; }
  double y(int iy) const noexcept { return dx() * iy; }

  std::size_t index(int ix, int iy) const noexcept {
    return static_cast<std::size_t>(iy) * n_ + ix;
  }

  /// Index of the mode -k for the mode stored at (ix, iy).
  std::size_t conjugate_index(int ix, int iy) const noexcept {
    return index((n_ - ix) % n_, (n_ - iy) % n_);
  }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_ == b.n_ && a.l_ == b.l_ && a.dealias_fraction_ == b.dealias_fraction_;
  }

 private:
  int n_;
  double l_;
  double dealias_fraction_;
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) {
    throw ShapeMismatch(std::string(where) + ": fields live on different grids");
  }
}

}  // namespace insdecay
