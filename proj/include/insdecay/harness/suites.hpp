#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "insdecay/analysis/calculus.hpp"
#include "insdecay/analysis/gronwall.hpp"
#include "insdecay/besov/inequalities.hpp"
#include "insdecay/harness/energy_ledger.hpp"
#include "insdecay/harness/fourier_splitting.hpp"
#include "insdecay/harness/initial_data.hpp"
#include "insdecay/transport/product_law.hpp"

namespace insdecay {

/// One checked quantity: passed when value <= limit (or the stated relation).
struct SuiteLine {
  std::string label;
  double value = 0.0;
  double limit = 0.0;
  bool passed = true;
  std::string note;
};

struct SuiteResult {
  std::string name;
  std::vector<SuiteLine> lines;

  bool passed() const {
    for (const auto& l : lines) {
      if (!l.passed) return false;
    }
    return true;
  }
  void check_le(std::string label, double value, double limit, std::string note = {}) {
    lines.push_back({std::move(label), value, limit, value <= limit, std::move(note)});
  }
  void check_ge(std::string label, double value, double limit, std::string note = {}) {
    lines.push_back({std::move(label), value, limit, value >= limit, std::move(note)});
  }
  void report(std::string label, double value, std::string note = {}) {
    lines.push_back({std::move(label), value, HUGE_VAL, true, std::move(note)});
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> n = {"bernstein", "heat_block",  "lemma23",
                                             "gronwall",  "product_law", "splitting"};
  return n;
}

/// Max Bernstein ratio (p, q) = (2, inf) over 100 localized block fields per
/// j = 2..6; stable when every row is within 20% of the mean.
inline SuiteResult bernstein_suite(std::uint64_t seed, int count = 100) {
  SuiteResult r{"bernstein", {}};
  const auto rows = bernstein_ensemble(Grid(512, 4.0), 2, 6, count, seed, 2.0, kInf, {0, 0});
  std::vector<double> v;
  for (const auto& row : rows) {
    v.push_back(row.max_ratio);
    r.report("max_ratio[j=" + std::to_string(row.j) + "]", row.max_ratio);
  }
  r.check_le("relative_spread", relative_spread(v), 0.2);
  return r;
}

/// Annulus bracket e^{-t(8l/3)^2} <= ratio <= e^{-t(3l/4)^2} on random fields.
inline SuiteResult heat_block_suite(std::uint64_t seed, int count = 20) {
  SuiteResult r{"heat_block", {}};
  const Grid g(128, 2 * std::numbers::pi);
  const CounterRng rng(seed, "heat-block");
  double worst_lo = HUGE_VAL, worst_hi = HUGE_VAL;
  for (int s = 0; s < count; ++s) {
    SpectralField f(g);
    for (int iy = 0; iy < g.n(); ++iy) {
      for (int ix = 0; ix < g.n(); ++ix) {
        const int mx = g.mode(ix), my = g.mode(iy);
        if (!(my > 0 || (my == 0 && mx > 0)) || !g.keeps(ix, iy)) continue;
        const std::uint64_t id = (static_cast<std::uint64_t>(s) << 40) |
                                 (static_cast<std::uint64_t>(ix) << 20) | static_cast<std::uint64_t>(iy);
        const cplx c(rng.normal(2 * id), rng.normal(2 * id + 1));
        f(ix, iy) = c;
        f[g.conjugate_index(ix, iy)] = std::conj(c);
      }
    }
    for (double lambda : {4.0, 8.0, 16.0}) {
      for (double t : {0.0, 0.001, 0.01, 0.03}) {
        const double ratio = heat_block_decay(f, lambda, t);
        const auto [lo, hi] = heat_block_bracket(lambda, t);
        // Margins relative to the bracket ends; both must stay >= 0.
        worst_lo = std::min(worst_lo, ratio - lo * (1 - 1e-12));
        worst_hi = std::min(worst_hi, hi * (1 + 1e-12) - ratio);
      }
    }
  }
  r.check_ge("min(ratio - lower)", worst_lo, 0.0);
  r.check_ge("min(upper - ratio)", worst_hi, 0.0);
  return r;
}

inline SuiteResult lemma23_suite_result(const GammaTable& table) {
  SuiteResult r{"lemma23", {}};
  const auto rep = lemma23_suite(LemmaSweep::standard(), table);
  r.check_le("|case1(m=2, t=inf) - 1|", std::abs(rep.case1_value - 1.0), 1e-8);
  r.check_le("failing_cells", static_cast<double>(rep.failures), 0.0,
             std::to_string(rep.cells.size()) + " cells");
  r.report("worst_margin", rep.worst_margin);
  return r;
}

inline SuiteResult gronwall_suite(std::uint64_t seed, int count = 100) {
  SuiteResult r{"gronwall", {}};
  double worst = -HUGE_VAL;
  for (int i = 0; i < count; ++i) {
    worst = std::max(worst, gronwall_check(GronwallInstance::random(seed, i)).violation);
  }
  r.check_le("max relative (oracle - bound)", worst, kGronwallQuadratureTol,
             std::to_string(count) + " instances");
  return r;
}

/// Ensemble max ratio at eta = 1.5 on n = 128 and 256, homogeneity, and the
/// eta = 0.5 negative control (reported only).
inline SuiteResult product_law_suite(std::uint64_t seed, int count = 200, double k_band = 16.0) {
  SuiteResult r{"product_law", {}};
  const double L = 2 * std::numbers::pi;
  const auto coarse = product_law_ensemble(Grid(128, L), count, {1.5, 0.5}, seed, k_band);
  const auto fine = product_law_ensemble(Grid(256, L), count, {1.5, 0.5}, seed, k_band);
  r.report("max_ratio[eta=1.5, n=128]", coarse[0].max_ratio);
  r.report("max_ratio[eta=1.5, n=256]", fine[0].max_ratio);
  r.check_le("refinement change", std::abs(fine[0].max_ratio / coarse[0].max_ratio - 1.0), 0.3);
  r.report("max_ratio[eta=0.5, n=256]", fine[1].max_ratio, "hypothesis eta > 1 violated");

  const Grid g(128, L);
  const auto a = product_law_field(g, seed, 0, k_band);
  const auto b = product_law_field(g, seed, 1, k_band);
  const double base = product_law_check(a, b, 1.5).ratio;
  SpectralField a2 = a, b2 = b;
  a2 *= -2.5;
  b2 *= 1e-3;
  r.check_le("homogeneity", std::abs(product_law_check(a2, b2, 1.5).ratio / base - 1.0), 1e-12);
  return r;
}

/// Heat-flow control: rho = 1, linear Stokes, M swept. Passes when the
/// smallest passing M is <= 2 and every M >= 2 passes.
inline SuiteResult splitting_suite(std::uint64_t seed) {
  SuiteResult r{"splitting", {}};
  const Grid g(64, 40.0);
  InitialDataSpec spec;
  spec.profile = SpectralProfile::flat_disk(1.0);
  spec.seed = seed;
  const FlowState s0(0.0, gen_initial_velocity(spec, g), DensityField::constant(g, 1.0));
  RunOptions opt;
  opt.dt = 0.1;
  opt.t_final = 20.0;
  opt.snapshot_every = 5;
  opt.keep_snapshots = false;
  opt.step.nonlinear = false;
  SplittingTracker tr(default_M_sweep());
  const auto traj = run(s0, ViscosityLaw::affine(1.0, 0.0), opt, [&](const Snapshot& s) { tr.add(s); });
  r.check_ge("run completed", traj.completed ? 1.0 : 0.0, 1.0);
  const auto sw = tr.result();
  bool all_above = true;
  for (const auto& rep : sw.reports) {
    r.report("worst_violation[M=" + io::format_double(rep.M) + "]", rep.worst_violation,
             rep.passed ? "pass" : "fail");
    if (rep.M >= 2.0 && !rep.passed) all_above = false;
  }
  r.check_le("smallest passing M", sw.smallest_passing_M.value_or(HUGE_VAL), 2.0);
  r.check_ge("all M >= 2 pass", all_above ? 1.0 : 0.0, 1.0);
  return r;
}

}  // namespace insdecay
