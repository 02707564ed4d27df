#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "insdecay/solver/integrator.hpp"

namespace insdecay {

/// g^2(t) = numerator / ((e + t) ln(e + t))
inline double splitting_g2(double t, double numerator) {
  const double s = std::numbers::e + t;
  return numerator / (s * std::log(s));
}

struct SplittingSample {
  double t = 0.0;
  double energy_rate = 0.0;  // d/dt ||sqrt(rho) u||^2
  double damping = 0.0;      // g^2 ||sqrt(rho) u||^2
  double low_freq = 0.0;     // int_{S(t)} |u_hat|^2
  double forcing = 0.0;      // M g^2 low_freq
  double violation = 0.0;    // energy_rate + damping - forcing
};

struct SplittingReport {
  double M = 0.0;
  double g_numerator = 2.0;
  double tolerance = 0.0;
  double worst_violation = 0.0;  // max signed violation
  double scale = 0.0;            // max |energy_rate| + damping over samples
  bool passed = true;
  std::vector<SplittingSample> samples;
};

inline SplittingSample splitting_sample(const Snapshot& s, double M, double g_numerator) {
  SplittingSample x;
  x.t = s.state.t;
  const double g2 = splitting_g2(x.t, g_numerator);
  x.energy_rate = s.diag.energy_rate;
  x.damping = g2 * s.diag.energy;
  x.low_freq = low_frequency_energy(s.state.u.vec(), std::sqrt(0.5 * M * g2));
  x.forcing = M * g2 * x.low_freq;
  x.violation = x.energy_rate + x.damping - x.forcing;
  return x;
}

inline SplittingReport make_splitting_report(double M, double g_numerator, double tol) {
  if (!(M > 0.0)) throw DomainError("fourier_splitting_check: M must be > 0");
  SplittingReport r;
  r.M = M;
  r.g_numerator = g_numerator;
  r.tolerance = tol;
  r.worst_violation = -HUGE_VAL;
  return r;
}

inline void add_sample(SplittingReport& r, const SplittingSample& x) {
  r.worst_violation = std::max(r.worst_violation, x.violation);
  r.scale = std::max(r.scale, std::abs(x.energy_rate) + x.damping);
  r.passed = r.worst_violation <= r.tolerance * r.scale;
  r.samples.push_back(x);
}

/// Check d/dt E + g^2 E <= M g^2 int_{|xi| <= sqrt(M/2) g} |u_hat|^2 at every
/// snapshot. Violations are compared with tol * scale.
inline SplittingReport fourier_splitting_check(const std::vector<Snapshot>& snaps, double M,
                                               double g_numerator = 2.0, double tol = 1e-8) {
  if (snaps.empty()) throw DomainError("fourier_splitting_check: trajectory has no snapshots");
  SplittingReport r = make_splitting_report(M, g_numerator, tol);
  for (const auto& s : snaps) add_sample(r, splitting_sample(s, M, g_numerator));
  return r;
}

struct SplittingSweep {
  std::vector<SplittingReport> reports;
  std::optional<double> smallest_passing_M;
};

inline const std::vector<double>& default_M_sweep() {
  static const std::vector<double> m = {1, 1.5, 2, 3, 5, 10, 20, 50, 100};
  return m;
}

/// Streaming form of the M sweep, fed one snapshot at a time so that long
/// runs need not keep their snapshots.
class SplittingTracker {
 public:
  SplittingTracker(std::vector<double> Ms, double g_numerator = 2.0, double tol = 1e-8) {
    for (double M : Ms) sweep_.reports.push_back(make_splitting_report(M, g_numerator, tol));
  }

  void add(const Snapshot& s) {
    for (auto& r : sweep_.reports) add_sample(r, splitting_sample(s, r.M, r.g_numerator));
  }

  SplittingSweep result() const {
    SplittingSweep out = sweep_;
    for (const auto& r : out.reports) {
      if (r.samples.empty()) throw DomainError("fourier_splitting_check: no snapshots");
      if (r.passed && (!out.smallest_passing_M || r.M < *out.smallest_passing_M)) {
        out.smallest_passing_M = r.M;
      }
    }
    return out;
  }

 private:
  SplittingSweep sweep_;
};

inline SplittingSweep sweep_splitting(const std::vector<Snapshot>& snaps,
                                      const std::vector<double>& Ms, double g_numerator = 2.0,
                                      double tol = 1e-8) {
  SplittingTracker tr(Ms, g_numerator, tol);
  for (const auto& s : snaps) tr.add(s);
  return tr.result();
}

}  // namespace insdecay
