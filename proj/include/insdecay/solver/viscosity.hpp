#pragma once

// pchip.hpp calls isnan unqualified and relies on boost::math::isnan being declared.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "insdecay/error.hpp"
#include "insdecay/spectral/field.hpp"

namespace insdecay {

/// Density-dependent viscosity mu(rho) with mu(1) = mu0.
class ViscosityLaw {
 public:
  enum class Kind { affine, power, table };

  /// mu0 + slope (rho - 1)
  static ViscosityLaw affine(double mu0, double slope) {
    require_mu0(mu0);
    ViscosityLaw law(Kind::affine, mu0);
    law.a_ = slope;
    return law;
  }

  /// mu0 rho^gamma
  static ViscosityLaw power(double mu0, double gamma) {
    require_mu0(mu0);
    ViscosityLaw law(Kind::power, mu0);
    law.a_ = gamma;
    return law;
  }

  /// Monotone cubic (PCHIP) through (rho_i, mu_i); rho = 1 must lie in range.
  static ViscosityLaw table(std::vector<double> rho, std::vector<double> mu) {
    if (rho.size() != mu.size() || rho.size() < 4) {
      throw DomainError("ViscosityLaw::table: need >= 4 matching (rho, mu) pairs");
    }
    for (std::size_t i = 1; i < rho.size(); ++i) {
      if (!(rho[i] > rho[i - 1])) throw DomainError("ViscosityLaw::table: rho must increase");
    }
    for (double m : mu) {
      if (!(m > 0.0)) throw DomainError("ViscosityLaw::table: mu values must be positive");
    }
    if (!(rho.front() <= 1.0 && rho.back() >= 1.0)) {
      throw DomainError("ViscosityLaw::table: rho = 1 must lie inside the table");
    }
    ViscosityLaw law(Kind::table, 0.0);
    law.rho_ = rho;
    law.mu_ = mu;
    law.spline_ = std::make_shared<Spline>(std::move(rho), std::move(mu));
    law.mu0_ = (*law.spline_)(1.0);
    return law;
  }

  Kind kind() const noexcept { return kind_; }
  double mu0() const noexcept { return mu0_; }
  double parameter() const noexcept { return a_; }
  const std::vector<double>& table_rho() const noexcept { return rho_; }
  const std::vector<double>& table_mu() const noexcept { return mu_; }

  double operator()(double rho) const {
    switch (kind_) {
      case Kind::affine:
        return mu0_ + a_ * (rho - 1.0);
      case Kind::power:
        return mu0_ * std::pow(rho, a_);
      case Kind::table:
        if (rho < rho_.front() || rho > rho_.back()) {
          throw DomainError("ViscosityLaw: density " + std::to_string(rho) +
                            " outside the tabulated range");
        }
        return (*spline_)(rho);
    }
    return mu0_;
  }

  NodalField apply(const NodalField& rho) const {
    NodalField out(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = (*this)(rho[i]);
    return out;
  }

  /// Throws unless mu > 0 on [rho_lo, rho_hi] (checked on a fine sample).
  void require_positive(double rho_lo, double rho_hi) const {
    const int samples = 257;
    for (int i = 0; i < samples; ++i) {
      const double r = rho_lo + (rho_hi - rho_lo) * i / (samples - 1.0);
      if (!((*this)(r) > 0.0)) {
        throw DomainError("ViscosityLaw: mu(" + std::to_string(r) + ") is not positive");
      }
    }
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::affine:
        return "affine(mu0=" + std::to_string(mu0_) + ", slope=" + std::to_string(a_) + ")";
      case Kind::power:
        return "power(mu0=" + std::to_string(mu0_) + ", gamma=" + std::to_string(a_) + ")";
      case Kind::table:
        return "table(" + std::to_string(rho_.size()) + " points, mu0=" + std::to_string(mu0_) +
               ")";
    }
    return {};
  }

 private:
  using Spline = boost::math::interpolators::pchip<std::vector<double>>;

  ViscosityLaw(Kind k, double mu0) : kind_(k), mu0_(mu0) {}

  static void require_mu0(double mu0) {
    if (!(mu0 > 0.0) || !std::isfinite(mu0)) throw DomainError("ViscosityLaw: mu0 must be > 0");
  }

  Kind kind_;
  double mu0_;
  double a_ = 0.0;
  std::vector<double> rho_, mu_;
  std::shared_ptr<const Spline> spline_;
};

}  // namespace insdecay
