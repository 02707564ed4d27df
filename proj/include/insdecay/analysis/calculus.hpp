#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "insdecay/error.hpp"
#include "insdecay/io/format.hpp"

namespace insdecay {

/// The three log-weighted integrals:
///   1: int_0^t (s+e)^{-1} ln(s+e)^{-m} ds          <= 1/(m-1)
///   2: int_0^t (s+e)^{-1-beta} ln(s+e)^m ds        <= gamma_m beta^{-(m+1)}
///   3: int_0^t (s+e)^{-alpha} ln(s+e)^{-m} ds      <= gamma_{m,alpha} (t+e)^{1-alpha} ln(t+e)^{-m}
struct CalculusParams {
  int kase = 1;
  double m = 2.0;
  double alpha = 0.0;
  double beta = 1.0;
  double t = HUGE_VAL;  // case 1 and 2 accept t = inf
};

inline void validate(const CalculusParams& p) {
  if (!(p.t >= 0.0)) throw DomainError("calculus_integral: t must be >= 0");
  switch (p.kase) {
    case 1:
      if (!(p.m > 1.0)) throw DomainError("calculus_integral: case 1 needs m > 1");
      break;
    case 2:
      if (!(p.beta > 0.0)) throw DomainError("calculus_integral: case 2 needs beta > 0");
      if (!(p.m >= 0.0)) throw DomainError("calculus_integral: case 2 needs m >= 0");
      break;
    case 3:
      if (!(p.alpha >= 0.0 && p.alpha < 1.0)) {
        throw DomainError("calculus_integral: case 3 needs 0 <= alpha < 1");
      }
      if (!(p.m >= 0.0)) throw DomainError("calculus_integral: case 3 needs m >= 0");
      if (std::isinf(p.t)) throw DomainError("calculus_integral: case 3 needs finite t");
      break;
    default:
      throw DomainError("calculus_integral: case must be 1, 2 or 3");
  }
}

struct Quadrature {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive quadrature after u = ln(s + e), ds = e^u du, on [1, ln(t + e)].
inline Quadrature calculus_quadrature(const CalculusParams& p) {
  validate(p);
  const double m = p.m, a = p.alpha, b = p.beta;
  auto f = [&](double u) -> double {
    switch (p.kase) {
      case 1: return std::pow(u, -m);
      // Log form keeps the far tail at 0 instead of 0 * inf.
      case 2: return std::exp(-b * u + m * std::log(u));
      default: return std::exp((1.0 - a) * u - m * std::log(u));
    }
  };
  Quadrature q;
  if (p.t == 0.0) return q;
  if (std::isinf(p.t)) {
    boost::math::quadrature::exp_sinh<double> integrator;
    q.value = integrator.integrate([&](double v) { return f(1.0 + v); }, 0.0,
                                   std::numeric_limits<double>::infinity(), 1e-14, &q.error);
    return q;
  }
  const double L = std::log(p.t + std::numbers::e);
  q.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 1.0, L, 10, 1e-12,
                                                                          &q.error);
  return q;
}

/// Right side without the gamma factor.
inline double calculus_rhs(const CalculusParams& p) {
  validate(p);
  switch (p.kase) {
    case 1: return 1.0 / (p.m - 1.0);
    case 2: return std::pow(p.beta, -(p.m + 1.0));
    default: {
      const double te = p.t + std::numbers::e;
      return std::pow(te, 1.0 - p.alpha) * std::pow(std::log(te), -p.m);
    }
  }
}

/// Fitted gamma constants, keyed gamma2(m) and gamma3(m,alpha).
class GammaTable {
 public:
  static std::string key(int kase, double m, double alpha = 0.0) {
    if (kase == 2) return "gamma2(" + io::format_double(m) + ")";
    if (kase == 3) return "gamma3(" + io::format_double(m) + "," + io::format_double(alpha) + ")";
    throw DomainError("GammaTable: only cases 2 and 3 carry a gamma");
  }

  void set(const std::string& k, double v) { values_[k] = v; }
  bool has(const std::string& k) const { return values_.count(k) > 0; }
  double get(const std::string& k) const {
    const auto it = values_.find(k);
    if (it == values_.end()) throw Error("gamma table has no entry " + k);
    return it->second;
  }
  const std::map<std::string, double>& values() const { return values_; }

  static GammaTable read(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read gamma table " + path);
    boost::property_tree::ptree pt;
    try {
      boost::property_tree::ini_parser::read_ini(is, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError(path + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    GammaTable t;
    for (const auto& [k, v] : pt) {
      try {
        t.set(k, io::parse_double(v.data()));
      } catch (const Error&) {
        throw ConfigError(path + ": " + k + ": not a number '" + v.data() + "'");
      }
    }
    return t;
  }

  void write(const std::string& path, const std::string& comment) const {
    std::ofstream os(path);
    if (!os) throw Error("cannot write gamma table " + path);
    std::string line;
    for (char c : comment) {
      if (c == '\n') {
        os << "; " << line << '\n';
        line.clear();
      } else {
        line += c;
      }
    }
    if (!line.empty()) os << "; " << line << '\n';
    // Ten significant digits, matching the rounding in fit_gamma_table.
    for (const auto& [k, v] : values_) {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 10);
      os << k << " = " << std::string(buf, res.ptr) << '\n';
    }
  }

 private:
  std::map<std::string, double> values_;
};

struct CalculusResult {
  CalculusParams params;
  double value = 0.0;
  double quad_error = 0.0;
  double rhs = 0.0;        // right side without gamma
  double gamma = 1.0;      // 1 for case 1; NaN when the table lacks the cell
  double bound = 0.0;      // gamma * rhs
  double margin = 0.0;     // 1 - value / bound
  bool within = false;
};

inline CalculusResult calculus_integral(const CalculusParams& p, const GammaTable* table = nullptr) {
  CalculusResult r;
  r.params = p;
  const Quadrature q = calculus_quadrature(p);
  r.value = q.value;
  r.quad_error = q.error;
  r.rhs = calculus_rhs(p);
  if (p.kase == 1) {
    r.gamma = 1.0;
  } else {
    const std::string k = GammaTable::key(p.kase, p.m, p.alpha);
    r.gamma = table && table->has(k) ? table->get(k) : std::nan("");
  }
  r.bound = r.gamma * r.rhs;
  r.margin = 1.0 - r.value / r.bound;
  // Case 1 at t = inf is an equality, so allow the quadrature's own error.
  r.within = r.value - r.bound <= std::max(q.error, 1e-12 * r.bound);
  return r;
}

/// Parameter grid over which the gamma constants are fitted and checked.
struct LemmaSweep {
  std::vector<double> m1{1.25, 1.5, 2.0, 3.0, 5.0};
  std::vector<double> m2{0.0, 0.5, 1.0, 2.0, 3.0};
  std::vector<double> betas{0.05, 0.1, 0.25, 0.5, 1.0, 2.0};
  std::vector<double> m3{0.0, 0.5, 1.0, 2.0, 3.0};
  std::vector<double> alphas{0.0, 0.25, 0.5, 0.75};
  std::vector<double> ts;  // finite t values; cases 1 and 2 also use t = inf

  static LemmaSweep standard() {
    LemmaSweep s;
    // 10 points per decade on [1e-3, 1e6].
    for (int i = 0; i <= 90; ++i) s.ts.push_back(std::pow(10.0, -3.0 + i / 10.0));
    return s;
  }

  std::vector<CalculusParams> cells() const {
    std::vector<CalculusParams> out;
    std::vector<double> t_all = ts;
    t_all.push_back(HUGE_VAL);
    for (double m : m1) {
      for (double t : t_all) out.push_back({1, m, 0.0, 1.0, t});
    }
    for (double m : m2) {
      for (double b : betas) {
        for (double t : t_all) out.push_back({2, m, 0.0, b, t});
      }
    }
    for (double m : m3) {
      for (double a : alphas) {
        for (double t : ts) out.push_back({3, m, a, 1.0, t});
      }
    }
    return out;
  }

  std::string describe() const {
    auto list = [](const std::vector<double>& v) {
      std::string s;
      for (double x : v) s += (s.empty() ? "" : " ") + io::format_double(x);
      return s;
    };
    return "sweep: t = 10^(-3 + i/10), i = 0..90, plus t = inf for cases 1 and 2\n"
           "case 2: m in {" + list(m2) + "}, beta in {" + list(betas) + "}\n"
           "case 3: m in {" + list(m3) + "}, alpha in {" + list(alphas) + "}";
  }
};

/// Observed supremum of value / rhs per (m) or (m, alpha) over the sweep,
/// rounded up at the tenth significant digit.
inline GammaTable fit_gamma_table(const LemmaSweep& sweep) {
  std::map<std::string, double> sup;
  for (const auto& p : sweep.cells()) {
    if (p.kase == 1) continue;
    const double ratio = calculus_quadrature(p).value / calculus_rhs(p);
    auto& s = sup[GammaTable::key(p.kase, p.m, p.alpha)];
    s = std::max(s, ratio);
  }
  GammaTable t;
  for (const auto& [k, v] : sup) {
    const double scale = std::pow(10.0, std::floor(std::log10(v)) - 9.0);
    t.set(k, std::ceil(v / scale * (1.0 + 1e-12)) * scale);
  }
  return t;
}

struct LemmaSuiteReport {
  std::vector<CalculusResult> cells;
  std::size_t failures = 0;
  double worst_margin = HUGE_VAL;
  bool case1_equality = false;  // m = 2, t = inf reproduces 1
  double case1_value = 0.0;
};

inline LemmaSuiteReport lemma23_suite(const LemmaSweep& sweep, const GammaTable& table) {
  LemmaSuiteReport r;
  for (const auto& p : sweep.cells()) {
    auto c = calculus_integral(p, &table);
    if (!c.within) ++r.failures;
    r.worst_margin = std::min(r.worst_margin, c.margin);
    r.cells.push_back(c);
  }
  r.case1_value = calculus_quadrature({1, 2.0, 0.0, 1.0, HUGE_VAL}).value;
  r.case1_equality = std::abs(r.case1_value - 1.0) <= 1e-8;
  return r;
}

}  // namespace insdecay
