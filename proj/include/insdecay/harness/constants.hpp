#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "insdecay/besov/besov_norm.hpp"
#include "insdecay/solver/flow_state.hpp"
#include "insdecay/solver/viscosity.hpp"

namespace insdecay {

/// Norms of the initial data entering K and G.
struct DataNorms {
  double lp = 0.0;      // ||u0||_{L^p}
  double h1 = 0.0;      // ||u0||_{H^1}
  double l2 = 0.0;      // ||u0||_{L^2}
  double rho_l2 = 0.0;  // ||rho0 - 1||_{L^2}
};

inline DataNorms data_norms(const DensityField& rho0, const VelocityField& u0, double p) {
  if (!(p >= 1.0)) throw DomainError("data_norms: p must be >= 1");
  DataNorms n;
  n.lp = lp_norm(u0, p);
  n.h1 = sobolev_norm(u0, 1.0);
  n.l2 = l2_norm(u0);
  NodalField d = rho0.nodal();
  for (auto& x : d) x -= 1.0;
  n.rho_l2 = lp_norm(d, rho0.grid(), 2.0);
  return n;
}

/// (Lp^2 + H1^2 + R^2 + Lp^2 H1^2 + (1 + R^2) H1^4) exp(C L2^4)
inline double compute_K(const DataNorms& n, double C) {
  if (!(C > 0.0)) throw DomainError("compute_K: C must be > 0");
  const double lp2 = n.lp * n.lp, h2 = n.h1 * n.h1, r2 = n.rho_l2 * n.rho_l2;
  const double poly = lp2 + h2 + r2 + lp2 * h2 + (1.0 + r2) * h2 * h2;
  return poly * std::exp(C * std::pow(n.l2, 4));
}

inline double compute_K(const DensityField& rho0, const VelocityField& u0, double p, double C) {
  return compute_K(data_norms(rho0, u0, p), C);
}

struct GTerm {
  std::string label;
  double value = 0.0;
};

struct GConstants {
  double G1 = 0.0;
  double G2 = 0.0;
  double G = 0.0;
  std::vector<GTerm> g1_terms;
  std::vector<GTerm> g2_terms;
};

/// G1 exp(G2) with both polynomials kept as term tables.
inline GConstants compute_G(const DataNorms& n) {
  const double R = n.rho_l2, L = n.lp, H = n.h1;
  GConstants g;
  g.g1_terms = {{"R", R},
                {"R^7", std::pow(R, 7)},
                {"Lp", L},
                {"Lp^7", std::pow(L, 7)},
                {"H1", H},
                {"Lp^7 H1^7", std::pow(L, 7) * std::pow(H, 7)},
                {"(1+R^7) H1^14", (1.0 + std::pow(R, 7)) * std::pow(H, 14)}};
  g.g2_terms = {{"Lp^4", std::pow(L, 4)},
                {"H1^4", std::pow(H, 4)},
                {"R^4", std::pow(R, 4)},
                {"Lp^4 H1^4", std::pow(L, 4) * std::pow(H, 4)},
                {"(1+R^4) H1^8", (1.0 + std::pow(R, 4)) * std::pow(H, 8)}};
  for (const auto& t : g.g1_terms) g.G1 += t.value;
  for (const auto& t : g.g2_terms) g.G2 += t.value;
  g.G = g.G1 * std::exp(g.G2);
  return g;
}

inline GConstants compute_G(const DensityField& rho0, const VelocityField& u0, double p) {
  return compute_G(data_norms(rho0, u0, p));
}

struct SmallnessConstants {
  double C = 1.0;
  double C0 = 1.0;
  double c0 = 0.01;
  double eta = 1.5;
};

struct SmallnessReport {
  DataNorms norms;
  double K = 0.0;
  GConstants G;
  double mu0 = 0.0;
  double besov_factor = 0.0;  // ||mu(rho0) - mu0||_{B^{(eta+1) ln}_{inf,1}}
  double lhs = 0.0;           // may overflow to inf; log_lhs stays finite
  double log_lhs = 0.0;       // -inf when lhs = 0
  double threshold = 0.0;     // c0 mu0
  double margin = 0.0;        // ln(threshold) - log_lhs
  bool passed = false;
  SmallnessConstants constants;
};

/// Left side assembled in the log domain:
/// ln B + (eta+1) ln((1+mu0) G / mu0) + (eta+1) exp(C0 ||u0||^4).
inline SmallnessReport check_smallness(const DensityField& rho0, const VelocityField& u0,
                                       const ViscosityLaw& law, double p,
                                       const SmallnessConstants& k = {}) {
  if (!(k.eta > 1.0)) throw DomainError("check_smallness: eta must be > 1");
  if (!(k.C0 > 0.0)) throw DomainError("check_smallness: C0 must be > 0");
  if (!(k.c0 > 0.0)) throw DomainError("check_smallness: c0 must be > 0");
  SmallnessReport r;
  r.constants = k;
  r.norms = data_norms(rho0, u0, p);
  r.K = compute_K(r.norms, k.C);
  r.G = compute_G(r.norms);
  r.mu0 = law.mu0();
  NodalField dmu = law.apply(rho0.nodal());
  for (auto& x : dmu) x -= r.mu0;
  r.besov_factor = log_besov_norm(to_spectral(dmu, rho0.grid()), k.eta + 1.0);
  r.threshold = k.c0 * r.mu0;

  const double e1 = k.eta + 1.0;
  if (r.besov_factor == 0.0 || r.G.G1 == 0.0) {
    r.lhs = 0.0;
    r.log_lhs = -HUGE_VAL;
  } else {
    const double log_G = std::log(r.G.G1) + r.G.G2;
    r.log_lhs = std::log(r.besov_factor) + e1 * (std::log1p(r.mu0) + log_G - std::log(r.mu0)) +
                e1 * std::exp(k.C0 * std::pow(r.norms.l2, 4));
    r.lhs = std::exp(r.log_lhs);
  }
  r.margin = std::log(r.threshold) - r.log_lhs;
  // Compare linearly while lhs is representable so the flip at c0 = lhs/mu0 is exact.
  r.passed = std::isfinite(r.lhs) ? r.lhs <= r.threshold : r.log_lhs <= std::log(r.threshold);
  return r;
}

}  // namespace insdecay
