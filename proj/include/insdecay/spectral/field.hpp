#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "insdecay/error.hpp"
#include "insdecay/spectral/fft.hpp"
#include "insdecay/spectral/grid.hpp"

namespace insdecay {

using cplx = std::complex<double>;

/// Nodal samples of a real field, stored with the Grid index convention.
using NodalField = std::vector<double>;

/// Fourier coefficients of a real scalar field on a periodic grid.
///
/// Normalization: f(x) = sum_k c_k e^{i k.x}, so c_0 is the mean of the
/// nodal values and ||f||_{L^2}^2 = l^2 sum_k |c_k|^2.
class SpectralField {
 public:
  explicit SpectralField(const Grid& grid) : grid_(grid), coeffs_(grid.size()) {}

  SpectralField(const Grid& grid, std::vector<cplx> coeffs)
      : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size()) {
      throw ShapeMismatch("SpectralField: expected " + std::to_string(grid_.size()) +
                          " coefficients, got " + std::to_string(coeffs_.size()));
    }
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<cplx> coeffs() noexcept { return coeffs_; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  cplx& operator()(int ix, int iy) noexcept { return coeffs_[grid_.index(ix, iy)]; }
  const cplx& operator()(int ix, int iy) const noexcept {
    return coeffs_[grid_.index(ix, iy)];
  }
  cplx& operator[](std::size_t i) noexcept { return coeffs_[i]; }
  const cplx& operator[](std::size_t i) const noexcept { return coeffs_[i]; }

  /// Coefficient of the mode with signed integer numbers (mx, my).
  cplx& at_mode(int mx, int my) {
    const int n = grid_.n();
    return (*this)(((mx % n) + n) % n, ((my % n) + n) % n);
  }
  const cplx& at_mode(int mx, int my) const {
    const int n = grid_.n();
    return (*this)(((mx % n) + n) % n, ((my % n) + n) % n);
  }

  SpectralField& operator+=(const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "SpectralField +=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "SpectralField -=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  SpectralField& operator*=(double s) noexcept {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "SpectralField axpy");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }

  /// Mean of the nodal values.
  double mean() const noexcept { return coeffs_[0].real(); }

  /// max_k |c(-k) - conj(c(k))| / max_k |c(k)|; zero for an exactly real field.
  double hermitian_defect() const noexcept {
    const int n = grid_.n();
    double worst = 0.0, scale = 0.0;
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const cplx c = coeffs_[grid_.index(ix, iy)];
        const cplx cm = coeffs_[grid_.conjugate_index(ix, iy)];
        worst = std::max(worst, std::abs(cm - std::conj(c)));
        scale = std::max(scale, std::abs(c));
      }
    }
    return scale > 0.0 ? worst / scale : 0.0;
  }

 private:
  Grid grid_;
  std::vector<cplx> coeffs_;
};

/// Two spectral components on a shared grid, with no divergence contract.
struct SpectralVector {
  SpectralField x;
  SpectralField y;

  explicit SpectralVector(const Grid& g) : x(g), y(g) {}
  SpectralVector(SpectralField a, SpectralField b) : x(std::move(a)), y(std::move(b)) {
    require_same_grid(x.grid(), y.grid(), "SpectralVector");
  }

  const Grid& grid() const noexcept { return x.grid(); }

  SpectralVector& operator+=(const SpectralVector& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  SpectralVector& operator-=(const SpectralVector& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  SpectralVector& operator*=(double s) noexcept {
    x *= s;
    y *= s;
    return *this;
  }
  SpectralVector& axpy(double s, const SpectralVector& o) {
    x.axpy(s, o.x);
    y.axpy(s, o.y);
    return *this;
  }
  friend SpectralVector operator+(SpectralVector a, const SpectralVector& b) { return a += b; }
  friend SpectralVector operator-(SpectralVector a, const SpectralVector& b) { return a -= b; }
  friend SpectralVector operator*(double s, SpectralVector a) { return a *= s; }
};

/// Divergence-free velocity. Instances come out of leray_project or a stream
/// function; `from_components` is for callers that already hold a solenoidal
/// pair (the constructor does not re-project).
class VelocityField {
 public:
  explicit VelocityField(const Grid& g) : v_(g) {}

  static VelocityField from_components(SpectralVector v) { return VelocityField(std::move(v)); }

  const Grid& grid() const noexcept { return v_.grid(); }
  const SpectralField& u1() const noexcept { return v_.x; }
  const SpectralField& u2() const noexcept { return v_.y; }
  const SpectralField& component(int axis) const { return axis == 1 ? v_.x : v_.y; }
  const SpectralVector& vec() const noexcept { return v_; }

  /// Mutable access; callers are responsible for keeping div u = 0.
  SpectralVector& mutable_vec() noexcept { return v_; }

  VelocityField& operator*=(double s) noexcept {
    v_ *= s;
    return *this;
  }

 private:
  explicit VelocityField(SpectralVector v) : v_(std::move(v)) {}
  SpectralVector v_;
};

/// Physical -> spectral; coeff(0) equals the nodal mean.
inline SpectralField to_spectral(std::span<const double> nodal, const Grid& grid) {
  if (nodal.size() != grid.size()) {
    throw ShapeMismatch("to_spectral: expected " + std::to_string(grid.size()) +
                        " nodal values, got " + std::to_string(nodal.size()));
  }
  std::vector<cplx> buf(nodal.begin(), nodal.end());
  detail::fft_forward(buf, grid.n());
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (auto& c : buf) c *= inv;
  return SpectralField(grid, std::move(buf));
}

/// Spectral -> physical (real part; the imaginary part is round-off for
/// Hermitian input).
inline NodalField to_physical(const SpectralField& f) {
  std::vector<cplx> buf(f.coeffs().begin(), f.coeffs().end());
  detail::fft_backward(buf, f.grid().n());
  NodalField out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
  return out;
}

/// Two real fields through one complex transform (f + i g).
inline std::pair<NodalField, NodalField> to_physical(const SpectralField& f,
                                                     const SpectralField& g) {
  require_same_grid(f.grid(), g.grid(), "to_physical(pair)");
  const auto cf = f.coeffs();
  const auto cg = g.coeffs();
  std::vector<cplx> buf(cf.size());
  const cplx i(0.0, 1.0);
  for (std::size_t k = 0; k < buf.size(); ++k) buf[k] = cf[k] + i * cg[k];
  detail::fft_backward(buf, f.grid().n());
  NodalField a(buf.size()), b(buf.size());
  for (std::size_t k = 0; k < buf.size(); ++k) {
    a[k] = buf[k].real();
    b[k] = buf[k].imag();
  }
  return {std::move(a), std::move(b)};
}

/// Two real nodal fields to spectral through one complex transform.
inline std::pair<SpectralField, SpectralField> to_spectral(std::span<const double> a,
                                                           std::span<const double> b,
                                                           const Grid& grid) {
  if (a.size() != grid.size() || b.size() != grid.size()) {
    throw ShapeMismatch("to_spectral(pair): nodal size does not match grid");
  }
  const int n = grid.n();
  std::vector<cplx> buf(grid.size());
  for (std::size_t k = 0; k < buf.size(); ++k) buf[k] = cplx(a[k], b[k]);
  detail::fft_forward(buf, n);
  const double inv = 1.0 / static_cast<double>(grid.size());
  std::vector<cplx> fa(grid.size()), fb(grid.size());
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t k = grid.index(ix, iy);
      const cplx z = buf[k];
      const cplx zc = std::conj(buf[grid.conjugate_index(ix, iy)]);
      fa[k] = 0.5 * (z + zc) * inv;
      fb[k] = cplx(0.0, -0.5) * (z - zc) * inv;
    }
  }
  return {SpectralField(grid, std::move(fa)), SpectralField(grid, std::move(fb))};
}

inline std::pair<NodalField, NodalField> to_physical(const SpectralVector& v) {
  return to_physical(v.x, v.y);
}

inline SpectralVector to_spectral_vector(std::span<const double> a, std::span<const double> b,
                                         const Grid& grid) {
  auto [fa, fb] = to_spectral(a, b, grid);
  return SpectralVector(std::move(fa), std::move(fb));
}

/// Nodal field sampled from f(x, y).
template <class F>
NodalField sample(const Grid& grid, F&& f) {
  NodalField out(grid.size());
  for (int iy = 0; iy < grid.n(); ++iy) {
    for (int ix = 0; ix < grid.n(); ++ix) {
      out[grid.index(ix, iy)] = f(grid.x(ix), grid.y(iy));
    }
  }
  return out;
}

}  // namespace insdecay
