#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "insdecay/besov/littlewood_paley.hpp"
#include "insdecay/spectral/norms.hpp"

namespace insdecay {

/// Either the classical B^s_{p,r} or the logarithmic B^{eta ln}_{inf,1}.
class BesovSpec {
 public:
  enum class Kind { classical, logarithmic };

  static BesovSpec classical(double s, double p, double r) {
    if (!(p >= 1.0) || !(r >= 1.0)) {
      throw DomainError("BesovSpec: classical spaces need p, r in [1, inf]");
    }
    if (!std::isfinite(s)) throw DomainError("BesovSpec: regularity must be finite");
    return BesovSpec(Kind::classical, s, p, r, 0.0);
  }

  static BesovSpec logarithmic(double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) {
      throw DomainError("BesovSpec: logarithmic weight needs eta > 0");
    }
    return BesovSpec(Kind::logarithmic, 0.0, kInf, 1.0, eta);
  }

  Kind kind() const noexcept { return kind_; }
  double s() const noexcept { return s_; }
  double p() const noexcept { return p_; }
  double r() const noexcept { return r_; }
  double eta() const noexcept { return eta_; }

  /// Weight of block j: 2^{js} or (2 + j)^eta.
  double weight(int j) const {
    return kind_ == Kind::classical ? std::exp2(j * s_) : std::pow(2.0 + j, eta_);
  }

  std::string describe() const {
    if (kind_ == Kind::logarithmic) return "B^{" + std::to_string(eta_) + " ln}_{inf,1}";
    auto fmt = [](double v) { return std::isinf(v) ? std::string("inf") : std::to_string(v); };
    return "B^{" + std::to_string(s_) + "}_{" + fmt(p_) + "," + fmt(r_) + "}";
  }

 private:
  BesovSpec(Kind k, double s, double p, double r, double eta)
      : kind_(k), s_(s), p_(p), r_(r), eta_(eta) {}

  Kind kind_;
  double s_, p_, r_, eta_;
};

/// ||Delta_j f||_{L^p} for j = -1..j_max (entry j + 1).
inline std::vector<double> block_norms(const SpectralField& f, double p) {
  require_lebesgue_exponent(p, "block_norms");
  const Grid& g = f.grid();
  const int jm = j_max(g);
  std::vector<double> out;
  out.reserve(jm + 2);
  // Two blocks per complex transform.
  for (int j = -1; j <= jm; j += 2) {
    if (j + 1 <= jm) {
      auto [a, b] = to_physical(dyadic_block(f, j), dyadic_block(f, j + 1));
      out.push_back(lp_norm(a, g, p));
      out.push_back(lp_norm(b, g, p));
    } else {
      out.push_back(lp_norm(dyadic_block(f, j), p));
    }
  }
  return out;
}

inline std::vector<double> block_norms(const DyadicDecomposition& d, double p) {
  std::vector<double> out;
  out.reserve(d.count());
  for (int j = -1; j <= d.j_max(); ++j) out.push_back(lp_norm(d.block(j), p));
  return out;
}

/// ell^r (or ell^1 for the logarithmic kind) sum of weighted block norms.
inline double besov_norm_from_blocks(const std::vector<double>& norms, const BesovSpec& spec) {
  const double r = spec.r();
  double acc = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const double term = spec.weight(static_cast<int>(i) - 1) * norms[i];
    if (std::isinf(r)) {
      acc = std::max(acc, term);
    } else if (r == 1.0) {
      acc += term;
    } else {
      acc += std::pow(term, r);
    }
  }
  if (!std::isinf(r) && r != 1.0) acc = std::pow(acc, 1.0 / r);
  return acc;
}

inline double besov_norm(const SpectralField& f, const BesovSpec& spec) {
  return besov_norm_from_blocks(block_norms(f, spec.p()), spec);
}

inline double log_besov_norm(const SpectralField& f, double eta) {
  return besov_norm(f, BesovSpec::logarithmic(eta));
}

}  // namespace insdecay
