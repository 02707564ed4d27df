#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "insdecay/io/csv.hpp"
#include "insdecay/solver/integrator.hpp"

namespace insdecay {

/// Time weight f(t) of the weighted energy estimate, with analytic f'(t).
class Weight {
 public:
  enum class Kind { t_plus_e, t_plus_e_log, t_plus_e_log2, power_ladder, interpolated };

  static Weight t_plus_e() { return Weight(Kind::t_plus_e); }
  static Weight t_plus_e_log() { return Weight(Kind::t_plus_e_log); }
  static Weight t_plus_e_log2() { return Weight(Kind::t_plus_e_log2); }

  /// (t + e)^{1 + 2 beta - eps}
  static Weight power_ladder(double beta, double eps) {
    Weight w(Kind::power_ladder);
    w.exponent_ = 1.0 + 2.0 * beta - eps;
    return w;
  }

  /// t^{1-r} (t + e)^{r + 2 beta - eps}, 0 < r < alpha < 1
  static Weight interpolated(double r, double alpha, double beta, double eps) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("interpolated weight: alpha in (0, 1)");
    if (!(r > 0.0 && r < alpha)) throw DomainError("interpolated weight: r must lie in (0, alpha)");
    Weight w(Kind::interpolated);
    w.r_ = r;
    w.exponent_ = r + 2.0 * beta - eps;
    return w;
  }

  static Weight parse(const std::string& name, double beta, double eps, double r, double alpha) {
    if (name == "t_plus_e") return t_plus_e();
    if (name == "t_plus_e_log") return t_plus_e_log();
    if (name == "t_plus_e_log2") return t_plus_e_log2();
    if (name == "power_ladder") return power_ladder(beta, eps);
    if (name == "interpolated") return interpolated(r, alpha, beta, eps);
    throw DomainError("unknown weight kind '" + name + "'");
  }

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }

  double operator()(double t) const {
    const double s = t + std::numbers::e;
    const double L = std::log(s);
    switch (kind_) {
      case Kind::t_plus_e:
        return s;
      case Kind::t_plus_e_log:
        return s * L;
      case Kind::t_plus_e_log2:
        return s * L * L;
      case Kind::power_ladder:
        return std::pow(s, exponent_);
      case Kind::interpolated:
        return std::pow(t, 1.0 - r_) * std::pow(s, exponent_);
    }
    return 0.0;
  }

  /// f'(t); +inf at t = 0 for the interpolated weight.
  double derivative(double t) const {
    const double s = t + std::numbers::e;
    const double L = std::log(s);
    switch (kind_) {
      case Kind::t_plus_e:
        return 1.0;
      case Kind::t_plus_e_log:
        return L + 1.0;
      case Kind::t_plus_e_log2:
        return L * L + 2.0 * L;
      case Kind::power_ladder:
        return exponent_ * std::pow(s, exponent_ - 1.0);
      case Kind::interpolated:
        if (t <= 0.0) return HUGE_VAL;
        return (1.0 - r_) * std::pow(t, -r_) * std::pow(s, exponent_) +
               exponent_ * std::pow(t, 1.0 - r_) * std::pow(s, exponent_ - 1.0);
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind_) {
      case Kind::t_plus_e:
        return "t_plus_e";
      case Kind::t_plus_e_log:
        return "t_plus_e_log";
      case Kind::t_plus_e_log2:
        return "t_plus_e_log2";
      case Kind::power_ladder:
        return "power_ladder";
      case Kind::interpolated:
        return "interpolated";
    }
    return {};
  }

 private:
  explicit Weight(Kind k) : kind_(k) {}
  Kind kind_;
  double exponent_ = 1.0;
  double r_ = 0.0;
};

struct LedgerRow {
  double t = 0.0;
  double f = 0.0;
  double f_grad_u2 = 0.0;      // f ||grad u||^2
  double f_dissipation = 0.0;  // f int mu |grad u|^2
  double fprime_energy = 0.0;  // f' int rho |u|^2
  double cum_f_ut2 = 0.0;      // int_0^t f ||u_t||^2
  double cum_f_inertia = 0.0;  // int_0^t f int rho |u_t|^2
  double cum_f_forces = 0.0;   // int_0^t f (||P div(mu M)||^2 + ||Q div(mu M) - grad Pi||^2)
  double cum_forces = 0.0;     // int_0^t (||P div|| + ||Q div - grad Pi|| + ||u_t||)
};

struct EnergyLedger {
  Weight weight = Weight::t_plus_e();
  std::vector<LedgerRow> rows;

  double sup_f_grad_u2() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.f_grad_u2);
    return m;
  }
  double total_f_ut2() const { return rows.empty() ? 0.0 : rows.back().cum_f_ut2; }
  double total_forces() const { return rows.empty() ? 0.0 : rows.back().cum_forces; }
};

/// Weighted functionals along a trajectory, cumulative columns by the
/// trapezoid rule on the diagnostic samples.
inline EnergyLedger energy_ledger(const std::vector<Diagnostics>& diag, const Weight& w) {
  EnergyLedger led;
  led.weight = w;
  led.rows.reserve(diag.size());
  double prev_t = 0.0, prev_ut = 0.0, prev_in = 0.0, prev_fo = 0.0, prev_un = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const Diagnostics& d = diag[i];
    LedgerRow r;
    r.t = d.t;
    r.f = w(d.t);
    r.f_grad_u2 = r.f * d.l2_grad_u * d.l2_grad_u;
    r.f_dissipation = r.f * d.dissipation;
    // Avoid inf * 0 at the start of a trivial trajectory.
    r.fprime_energy = d.energy == 0.0 ? 0.0 : w.derivative(d.t) * d.energy;
    const double ut = r.f * d.l2_ut * d.l2_ut;
    const double in = r.f * d.inertia;
    const double fo = r.f * (d.p_div * d.p_div + d.q_div_minus_gradpi * d.q_div_minus_gradpi);
    const double un = d.p_div + d.q_div_minus_gradpi + d.l2_ut;
    if (i > 0) {
      const LedgerRow& p = led.rows.back();
      const double h = 0.5 * (d.t - prev_t);
      r.cum_f_ut2 = p.cum_f_ut2 + h * (prev_ut + ut);
      r.cum_f_inertia = p.cum_f_inertia + h * (prev_in + in);
      r.cum_f_forces = p.cum_f_forces + h * (prev_fo + fo);
      r.cum_forces = p.cum_forces + h * (prev_un + un);
    }
    prev_t = d.t;
    prev_ut = ut;
    prev_in = in;
    prev_fo = fo;
    prev_un = un;
    led.rows.push_back(r);
  }
  return led;
}

/// Share of a nondecreasing cumulative series accrued over the last decade
/// [T/10, T], with linear interpolation at T/10.
inline double tail_fraction(const std::vector<double>& t, const std::vector<double>& cum) {
  if (t.size() != cum.size() || t.size() < 2) {
    throw DomainError("tail_fraction: need >= 2 matching samples");
  }
  const double total = cum.back();
  if (total == 0.0) return 0.0;
  const double t0 = 0.1 * t.back();
  auto it = std::lower_bound(t.begin(), t.end(), t0);
  double c0 = cum.front();
  if (it != t.begin() && it != t.end()) {
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double a = (t0 - t[k - 1]) / (t[k] - t[k - 1]);
    c0 = cum[k - 1] + a * (cum[k] - cum[k - 1]);
  }
  return (total - c0) / total;
}

inline double tail_fraction_forces(const EnergyLedger& led) {
  std::vector<double> t, c;
  for (const auto& r : led.rows) {
    t.push_back(r.t);
    c.push_back(r.cum_forces);
  }
  return tail_fraction(t, c);
}

/// max_i |v_i - mean| / mean
inline double relative_spread(const std::vector<double>& v) {
  if (v.empty()) throw DomainError("relative_spread: empty sample");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (mean == 0.0) return 0.0;
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x - mean));
  return worst / std::abs(mean);
}

inline io::Table ledger_table(const EnergyLedger& led) {
  io::Table tab;
  tab.columns = {"t",          "f",         "f_grad_u2",     "f_dissipation", "fprime_energy",
                 "cum_f_ut2",  "cum_f_inertia", "cum_f_forces", "cum_forces"};
  for (const auto& r : led.rows) {
    tab.rows.push_back({r.t, r.f, r.f_grad_u2, r.f_dissipation, r.fprime_energy, r.cum_f_ut2,
                        r.cum_f_inertia, r.cum_f_forces, r.cum_forces});
  }
  return tab;
}

}  // namespace insdecay
