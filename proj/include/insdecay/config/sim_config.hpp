#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "insdecay/error.hpp"
#include "insdecay/io/format.hpp"

namespace insdecay {

/// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "INSDECAY_OUTPUT_ROOT";

struct SimConfig {
  struct GridSection {
    int n = 128;
    double l = 200.0;
    double dealias = 2.0 / 3.0;

    bool operator==(const GridSection&) const = default;
  } grid;

  struct TimeSection {
    double dt = 0.5;
    double t_final = 100.0;
    int diag_every = 1;
    int snapshot_every = 20;
    double cfl_max = 0.5;

    bool operator==(const TimeSection&) const = default;
  } time;

  struct PhysicsSection {
    double mu0 = 1.0;
    std::string viscosity = "affine";  // affine | power | table
    double viscosity_param = 0.5;      // slope (affine) or exponent (power)
    std::vector<double> table_rho{0.8, 0.9, 1.0, 1.1, 1.2};
    std::vector<double> table_mu{0.9, 0.95, 1.0, 1.05, 1.1};
    double density_contrast = 0.05;
    double k_rho = 0.3;
    double p = 1.5;
    double alpha = 0.5;
    double eps = 0.1;
    std::string scheme = "spectral";  // spectral | semi_lagrangian
    bool nonlinear = true;
    double density_overshoot = 0.01;  // negative selects 1e-3 of the initial range
    double projection_tol = 1e-10;
    int projection_max_iter = 50;

    bool operator==(const PhysicsSection&) const = default;
  } physics;

  struct InitialSection {
    std::string profile = "flat_disk";  // flat_disk | power
    double k_c = 0.3;
    double sigma = -0.5;
    double amplitude = 1.0;
    std::string regularity = "h1";  // h1 | h_alpha

    bool operator==(const InitialSection&) const = default;
  } initial;

  struct HarnessSection {
    std::vector<double> m_sweep{1, 1.5, 2, 3, 5, 10, 20, 50, 100};
    double g_numerator = 2.0;
    double splitting_tol = 1e-8;
    std::string weight = "t_plus_e";  // t_plus_e | t_plus_e_log | t_plus_e_log2 | power_ladder | interpolated
    double interp_r = 0.25;
    double fit_t_lo = 0.0;  // 0 selects the default window
    double fit_t_hi = 0.0;
    double C = 1.0;
    double C0 = 1.0;
    double c0 = 0.01;
    double eta = 1.5;

    bool operator==(const HarnessSection&) const = default;
  } harness;

  struct TransportSection {
    double eta = 1.5;
    std::string velocity = "shear";  // shear | rotation
    double amplitude = 1.0;
    double horizon = 10.0;
    double dt = 0.02;
    int sample_every = 10;
    double cfl_max = 1.0;
    int threads = 1;
    int n = 128;
    double l = 6.283185307179586;
    int ensemble = 200;
    double k_band = 16.0;

    bool operator==(const TransportSection&) const = default;
  } transport;

  struct RunSection {
    std::uint64_t seed = 1;
    std::string output_dir;  // empty: $INSDECAY_OUTPUT_ROOT or ./insdecay-out
    std::string name = "run";
    int workers = 1;

    bool operator==(const RunSection&) const = default;
  } run;

  bool operator==(const SimConfig&) const = default;
};

namespace config_detail {

struct Field {
  std::string section;
  std::string key;
  std::function<std::string()> get;
  std::function<void(const std::string&)> set;
};

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline Field f_double(const char* sec, const char* key, double& v) {
  return {sec, key, [&v] { return io::format_double(v); },
          [&v](const std::string& s) { v = io::parse_double(s); }};
}

inline Field f_int(const char* sec, const char* key, int& v) {
  return {sec, key, [&v] { return std::to_string(v); },
          [&v](const std::string& s) {
            std::size_t pos = 0;
            const std::string t = trim(s);
            const long x = std::stol(t, &pos);
            if (pos != t.size()) throw Error("not an integer: '" + t + "'");
            v = static_cast<int>(x);
          }};
}

inline Field f_u64(const char* sec, const char* key, std::uint64_t& v) {
  return {sec, key, [&v] { return std::to_string(v); },
          [&v](const std::string& s) {
            std::size_t pos = 0;
            const std::string t = trim(s);
            if (!t.empty() && t[0] == '-') throw Error("not a non-negative integer: '" + t + "'");
            const unsigned long long x = std::stoull(t, &pos);
            if (pos != t.size()) throw Error("not an integer: '" + t + "'");
            v = x;
          }};
}

inline Field f_string(const char* sec, const char* key, std::string& v) {
  return {sec, key, [&v] { return v; }, [&v](const std::string& s) { v = trim(s); }};
}

inline Field f_bool(const char* sec, const char* key, bool& v) {
  return {sec, key, [&v] { return std::string(v ? "true" : "false"); },
          [&v](const std::string& s) {
            const std::string t = trim(s);
            if (t == "true" || t == "1") v = true;
            else if (t == "false" || t == "0") v = false;
            else throw Error("not a boolean: '" + t + "'");
          }};
}

/// Whitespace-separated list of numbers.
inline Field f_list(const char* sec, const char* key, std::vector<double>& v) {
  return {sec, key,
          [&v] {
            std::string out;
            for (double x : v) out += (out.empty() ? "" : " ") + io::format_double(x);
            return out;
          },
          [&v](const std::string& s) {
            std::vector<double> out;
            std::istringstream is(s);
            std::string tok;
            while (is >> tok) out.push_back(io::parse_double(tok));
            v = std::move(out);
          }};
}

inline std::vector<Field> fields(SimConfig& c) {
  auto& g = c.grid;
  auto& t = c.time;
  auto& p = c.physics;
  auto& i = c.initial;
  auto& h = c.harness;
  auto& x = c.transport;
  auto& r = c.run;
  return {
      f_int("grid", "n", g.n),
      f_double("grid", "l", g.l),
      f_double("grid", "dealias", g.dealias),
      f_double("time", "dt", t.dt),
      f_double("time", "t_final", t.t_final),
      f_int("time", "diag_every", t.diag_every),
      f_int("time", "snapshot_every", t.snapshot_every),
      f_double("time", "cfl_max", t.cfl_max),
      f_double("physics", "mu0", p.mu0),
      f_string("physics", "viscosity", p.viscosity),
      f_double("physics", "viscosity_param", p.viscosity_param),
      f_list("physics", "table_rho", p.table_rho),
      f_list("physics", "table_mu", p.table_mu),
      f_double("physics", "density_contrast", p.density_contrast),
      f_double("physics", "k_rho", p.k_rho),
      f_double("physics", "p", p.p),
      f_double("physics", "alpha", p.alpha),
      f_double("physics", "eps", p.eps),
      f_string("physics", "scheme", p.scheme),
      f_bool("physics", "nonlinear", p.nonlinear),
      f_double("physics", "density_overshoot", p.density_overshoot),
      f_double("physics", "projection_tol", p.projection_tol),
      f_int("physics", "projection_max_iter", p.projection_max_iter),
      f_string("initial", "profile", i.profile),
      f_double("initial", "k_c", i.k_c),
      f_double("initial", "sigma", i.sigma),
      f_double("initial", "amplitude", i.amplitude),
      f_string("initial", "regularity", i.regularity),
      f_list("harness", "m_sweep", h.m_sweep),
      f_double("harness", "g_numerator", h.g_numerator),
      f_double("harness", "splitting_tol", h.splitting_tol),
      f_string("harness", "weight", h.weight),
      f_double("harness", "interp_r", h.interp_r),
      f_double("harness", "fit_t_lo", h.fit_t_lo),
      f_double("harness", "fit_t_hi", h.fit_t_hi),
      f_double("harness", "C", h.C),
      f_double("harness", "C0", h.C0),
      f_double("harness", "c0", h.c0),
      f_double("harness", "eta", h.eta),
      f_double("transport", "eta", x.eta),
      f_string("transport", "velocity", x.velocity),
      f_double("transport", "amplitude", x.amplitude),
      f_double("transport", "horizon", x.horizon),
      f_double("transport", "dt", x.dt),
      f_int("transport", "sample_every", x.sample_every),
      f_double("transport", "cfl_max", x.cfl_max),
      f_int("transport", "threads", x.threads),
      f_int("transport", "n", x.n),
      f_double("transport", "l", x.l),
      f_int("transport", "ensemble", x.ensemble),
      f_double("transport", "k_band", x.k_band),
      f_u64("run", "seed", r.seed),
      f_string("run", "output_dir", r.output_dir),
      f_string("run", "name", r.name),
      f_int("run", "workers", r.workers),
  };
}

/// Line of `key` inside `[section]` in the raw text, or 0.
inline int locate(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream is(text);
  std::string line, current;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
    } else if (current == section) {
      const auto eq = t.find('=');
      if (eq != std::string::npos && trim(t.substr(0, eq)) == key) return n;
    }
  }
  return 0;
}

inline std::string where(const std::string& origin, int line, const std::string& field) {
  std::string s = origin;
  if (line > 0) s += ":" + std::to_string(line);
  return s + ": " + field;
}

}  // namespace config_detail

inline void validate(const SimConfig& c) {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw ConfigError(field + ": " + msg);
  };
  if (c.grid.n < 8 || c.grid.n % 2) fail("grid.n", "must be even and >= 8");
  if (!(c.grid.l > 0.0)) fail("grid.l", "must be > 0");
  if (!(c.grid.dealias > 0.0 && c.grid.dealias <= 1.0)) fail("grid.dealias", "must lie in (0, 1]");
  if (!(c.time.dt > 0.0)) fail("time.dt", "must be > 0");
  if (!(c.time.t_final >= 0.0)) fail("time.t_final", "must be >= 0");
  if (c.time.diag_every < 1) fail("time.diag_every", "must be >= 1");
  if (c.time.snapshot_every < 0) fail("time.snapshot_every", "must be >= 0");
  if (!(c.time.cfl_max > 0.0)) fail("time.cfl_max", "must be > 0");
  if (!(c.physics.mu0 > 0.0)) fail("physics.mu0", "must be > 0");
  const auto& v = c.physics.viscosity;
  if (v != "affine" && v != "power" && v != "table") {
    fail("physics.viscosity", "must be affine, power or table");
  }
  if (!(c.physics.density_contrast >= 0.0 && c.physics.density_contrast < 1.0)) {
    fail("physics.density_contrast", "must lie in [0, 1)");
  }
  if (!(c.physics.p > 1.0 && c.physics.p < 2.0)) fail("physics.p", "must lie in (1, 2)");
  if (!(c.physics.alpha > 0.0 && c.physics.alpha < 1.0)) fail("physics.alpha", "must lie in (0, 1)");
  if (!(c.physics.eps > 0.0)) fail("physics.eps", "must be > 0");
  if (c.physics.scheme != "spectral" && c.physics.scheme != "semi_lagrangian") {
    fail("physics.scheme", "must be spectral or semi_lagrangian");
  }
  if (!(c.physics.projection_tol > 0.0)) fail("physics.projection_tol", "must be > 0");
  if (c.physics.projection_max_iter < 1) fail("physics.projection_max_iter", "must be >= 1");
  if (c.initial.profile != "flat_disk" && c.initial.profile != "power") {
    fail("initial.profile", "must be flat_disk or power");
  }
  if (!(c.initial.k_c > 0.0)) fail("initial.k_c", "must be > 0");
  if (c.initial.profile == "power" && !(c.initial.sigma > -1.0 && c.initial.sigma < 0.0)) {
    fail("initial.sigma", "must lie in (-1, 0)");
  }
  if (!(c.initial.amplitude >= 0.0)) fail("initial.amplitude", "must be >= 0");
  if (c.initial.regularity != "h1" && c.initial.regularity != "h_alpha") {
    fail("initial.regularity", "must be h1 or h_alpha");
  }
  if (c.harness.m_sweep.empty()) fail("harness.m_sweep", "must not be empty");
  for (double M : c.harness.m_sweep) {
    if (!(M > 0.0)) fail("harness.m_sweep", "entries must be > 0");
  }
  if (!(c.harness.g_numerator > 0.0)) fail("harness.g_numerator", "must be > 0");
  if (!(c.harness.splitting_tol >= 0.0)) fail("harness.splitting_tol", "must be >= 0");
  const auto& w = c.harness.weight;
  if (w != "t_plus_e" && w != "t_plus_e_log" && w != "t_plus_e_log2" && w != "power_ladder" &&
      w != "interpolated") {
    fail("harness.weight", "unknown weight '" + w + "'");
  }
  if (!(c.harness.interp_r > 0.0 && c.harness.interp_r < c.physics.alpha)) {
    fail("harness.interp_r", "must lie in (0, physics.alpha)");
  }
  if (c.harness.fit_t_lo < 0.0 || c.harness.fit_t_hi < 0.0 ||
      (c.harness.fit_t_hi > 0.0 && !(c.harness.fit_t_hi > c.harness.fit_t_lo))) {
    fail("harness.fit_t_hi", "window overrides need 0 <= fit_t_lo < fit_t_hi");
  }
  if (!(c.harness.C > 0.0)) fail("harness.C", "must be > 0");
  if (!(c.harness.C0 > 0.0)) fail("harness.C0", "must be > 0");
  if (!(c.harness.c0 > 0.0)) fail("harness.c0", "must be > 0");
  if (!(c.harness.eta > 1.0)) fail("harness.eta", "must be > 1");
  if (!(c.transport.eta > 0.0)) fail("transport.eta", "must be > 0");
  if (c.transport.velocity != "shear" && c.transport.velocity != "rotation") {
    fail("transport.velocity", "must be shear or rotation");
  }
  if (!(c.transport.horizon > 0.0)) fail("transport.horizon", "must be > 0");
  if (!(c.transport.dt > 0.0)) fail("transport.dt", "must be > 0");
  if (c.transport.sample_every < 1) fail("transport.sample_every", "must be >= 1");
  if (c.transport.threads < 1) fail("transport.threads", "must be >= 1");
  if (c.transport.n < 8 || c.transport.n % 2) fail("transport.n", "must be even and >= 8");
  if (!(c.transport.l > 0.0)) fail("transport.l", "must be > 0");
  if (c.transport.ensemble < 1) fail("transport.ensemble", "must be >= 1");
  if (!(c.transport.k_band > 0.0)) fail("transport.k_band", "must be > 0");
  if (c.run.name.empty() || c.run.name.find('/') != std::string::npos) {
    fail("run.name", "must be a non-empty name without '/'");
  }
  if (c.run.workers < 1) fail("run.workers", "must be >= 1");
}

/// Every field, in section order, as key = value lines.
inline std::string serialize(const SimConfig& c) {
  SimConfig copy = c;
  std::string out, section;
  for (const auto& f : config_detail::fields(copy)) {
    if (f.section != section) {
      out += (section.empty() ? "" : "\n") + ("[" + f.section + "]\n");
      section = f.section;
    }
    out += f.key + " = " + f.get() + "\n";
  }
  return out;
}

/// Apply `section.key=value` to c. Field errors name the origin.
inline void apply_setting(SimConfig& c, const std::string& section, const std::string& key,
                          const std::string& value, const std::string& origin, int line) {
  for (auto& f : config_detail::fields(c)) {
    if (f.section == section && f.key == key) {
      try {
        f.set(value);
      } catch (const std::exception& e) {
        throw ConfigError(config_detail::where(origin, line, section + "." + key) + ": " + e.what());
      }
      return;
    }
  }
  throw ConfigError(config_detail::where(origin, line, section + "." + key) + ": unknown field");
}

/// Parse sectioned key = value text on top of the defaults (or `base`).
/// Unknown sections or keys are errors; a [report] section is skipped.
inline SimConfig parse_config(const std::string& text, const std::string& origin = "config",
                              SimConfig base = {}) {
  boost::property_tree::ptree pt;
  std::istringstream is(text);
  try {
    boost::property_tree::ini_parser::read_ini(is, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(config_detail::where(origin, static_cast<int>(e.line()), "syntax") + ": " +
                      e.message());
  }
  for (const auto& [section, tree] : pt) {
    if (section == "report") continue;  // report files embed their config
    if (config_detail::locate(text, "", section) > 0) {
      throw ConfigError(config_detail::where(origin, config_detail::locate(text, "", section),
                                             section) +
                        ": keys must sit inside a [section]");
    }
    for (const auto& [key, value] : tree) {
      apply_setting(base, section, key, value.data(), origin, config_detail::locate(text, section, key));
    }
  }
  try {
    validate(base);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    const auto dot = msg.find('.');
    const auto colon = msg.find(':');
    int line = 0;
    if (dot != std::string::npos && colon != std::string::npos && dot < colon) {
      line = config_detail::locate(text, msg.substr(0, dot), msg.substr(dot + 1, colon - dot - 1));
    }
    throw ConfigError(origin + (line > 0 ? ":" + std::to_string(line) : "") + ": " + msg);
  }
  return base;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path);
}

/// "section.key=value" command-line override; later overrides win.
inline void apply_override(SimConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("--set " + assignment + ": expected section.key=value");
  }
  apply_setting(c, config_detail::trim(assignment.substr(0, dot)),
                config_detail::trim(assignment.substr(dot + 1, eq - dot - 1)),
                assignment.substr(eq + 1), "--set", 0);
  try {
    validate(c);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("--set: ") + e.what());
  }
}

/// run.output_dir, else $INSDECAY_OUTPUT_ROOT, else ./insdecay-out; run.name appended.
inline std::filesystem::path output_directory(const SimConfig& c) {
  std::filesystem::path root = c.run.output_dir;
  if (root.empty()) {
    const char* env = std::getenv(kOutputRootEnv);
    root = env && *env ? env : "insdecay-out";
  }
  return root / c.run.name;
}

}  // namespace insdecay
