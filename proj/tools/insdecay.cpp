#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "insdecay/harness/experiment.hpp"
#include "insdecay/harness/suites.hpp"

#ifndef INSDECAY_DATA_DIR
#define INSDECAY_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace insdecay;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

/// Defaults, then the config file, then --set overrides, then --output.
struct ConfigArgs {
  std::string file;
  std::vector<std::string> sets;
  std::string output;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", file, "config file (sectioned key = value)")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "override, section.key=value (repeatable)");
    app->add_option("-o,--output", output, "output root (overrides run.output_dir)");
  }

  SimConfig resolve(const std::string& path) const {
    SimConfig c = path.empty() ? SimConfig{} : load_config(path);
    for (const auto& s : sets) apply_override(c, s);
    if (!output.empty()) c.run.output_dir = output;
    return c;
  }
  SimConfig resolve() const { return resolve(file); }
};

void print_report(const io::Report& r) {
  for (const auto& [k, v] : r.entries()) std::cout << k << " = " << v << '\n';
}

/// Config paths listed one per line; relative paths are taken from the
/// manifest's directory; blank lines and '#' comments are skipped.
std::vector<std::string> read_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path + ": cannot open manifest");
  std::vector<std::string> out;
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    const std::string t = config_detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    fs::path p = t;
    if (p.is_relative()) p = fs::path(path).parent_path() / p;
    if (!fs::exists(p)) throw ConfigError(path + ":" + std::to_string(n) + ": no such config " + p.string());
    out.push_back(p.string());
  }
  return out;
}

int cmd_simulate(const ConfigArgs& args, const std::string& manifest, int workers_flag) {
  std::vector<std::string> paths;
  if (!manifest.empty()) paths = read_manifest(manifest);
  if (!args.file.empty()) paths.insert(paths.begin(), args.file);
  if (paths.empty()) paths.push_back("");  // defaults only

  std::vector<SimConfig> jobs;
  std::vector<fs::path> dirs;
  for (const auto& p : paths) {
    jobs.push_back(args.resolve(p));
    dirs.push_back(output_directory(jobs.back()));
    for (std::size_t i = 0; i + 1 < dirs.size(); ++i) {
      if (dirs[i] == dirs.back()) {
        throw ConfigError((p.empty() ? "defaults" : p) + ": run.name collides with another job (" +
                          dirs.back().string() + ")");
      }
    }
  }
  const int workers = std::max(1, std::min<int>(workers_flag > 0 ? workers_flag : jobs.front().run.workers,
                                                 static_cast<int>(jobs.size())));

  std::atomic<std::size_t> next{0};
  std::atomic<int> failures{0};
  std::mutex out_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      std::string line;
      try {
        const auto s = simulate(jobs[i], dirs[i]);
        line = dirs[i].string() + ": " + (s.completed ? "completed" : "stopped: " + s.failure) + " after " +
               std::to_string(s.steps) + " steps";
        if (!s.completed) ++failures;
      } catch (const std::exception& e) {
        line = dirs[i].string() + ": error: " + e.what();
        ++failures;
      }
      std::lock_guard lock(out_mu);
      std::cout << line << std::endl;
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return failures > 0 ? kExitCheckFailed : 0;
}

int cmd_decay_fit(const std::string& dir, std::optional<double> t_lo, std::optional<double> t_hi) {
  std::optional<FitWindow> w;
  if (t_lo || t_hi) {
    if (!t_lo || !t_hi) throw ConfigError("decay_fit: give both --t-lo and --t-hi");
    w = FitWindow{*t_lo, *t_hi};
  }
  const auto rep = decay_fit_run(dir, w);
  print_report(rep);
  return 0;
}

BesovSpec parse_spec(const std::string& s) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  std::vector<double> v;
  std::stringstream ss(rest);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(io::parse_double(tok));
  if (kind == "log" && v.size() == 1) return BesovSpec::logarithmic(v[0]);
  if (kind == "classical" && v.size() == 3) return BesovSpec::classical(v[0], v[1], v[2]);
  throw ConfigError("--spec " + s + ": expected log:ETA or classical:S,P,R (p, r may be inf)");
}

int cmd_besov_norm(const std::string& file, const std::string& spec_text, const std::string& component) {
  const BesovSpec spec = parse_spec(spec_text);
  const FlowState s = io::read_snapshot(file);
  SpectralField f = [&] {
    if (component == "u1") return s.u.u1();
    if (component == "u2") return s.u.u2();
    if (component == "vorticity") return curl(s.u.vec());
    NodalField d = s.rho.nodal();
    for (auto& x : d) x -= 1.0;
    return to_spectral(d, s.grid());
  }();
  std::cout << "field = " << file << '\n'
            << "component = " << component << '\n'
            << "t = " << io::format_double(s.t) << '\n'
            << "spec = " << spec.describe() << '\n'
            << "norm = " << io::format_double(besov_norm(f, spec)) << '\n';
  return 0;
}

int cmd_transport(const ConfigArgs& args) {
  const SimConfig c = args.resolve();
  const auto dir = output_directory(c);
  print_report(transport_run(c, dir));
  std::cout << "output = " << dir.string() << '\n';
  return 0;
}

int cmd_smallness(const ConfigArgs& args) {
  const SimConfig c = args.resolve();
  const auto dir = output_directory(c);
  const auto [rep, s] = smallness_run(c, dir);
  print_report(rep);
  std::cout << "output = " << dir.string() << '\n';
  return s.passed ? 0 : kExitCheckFailed;
}

int cmd_verify(const std::vector<std::string>& suites, std::uint64_t seed, const std::string& gamma_file,
               bool refit) {
  if (refit) {
    const LemmaSweep sweep = LemmaSweep::standard();
    fit_gamma_table(sweep).write(gamma_file, "gamma constants: observed sup of value / rhs, rounded up at 10 "
                                             "significant digits\n" + sweep.describe());
    std::cout << "wrote " << gamma_file << '\n';
  }
  std::vector<std::string> run = suites;
  if (run.empty() || (run.size() == 1 && run[0] == "all")) run = suite_names();
  bool ok = true;
  for (const auto& name : run) {
    SuiteResult r;
    if (name == "bernstein") r = bernstein_suite(seed);
    else if (name == "heat_block") r = heat_block_suite(seed);
    else if (name == "lemma23") r = lemma23_suite_result(GammaTable::read(gamma_file));
    else if (name == "gronwall") r = gronwall_suite(seed);
    else if (name == "product_law") r = product_law_suite(seed);
    else if (name == "splitting") r = splitting_suite(seed);
    else throw ConfigError("unknown suite '" + name + "'");
    for (const auto& l : r.lines) {
      std::cout << "  " << r.name << ": " << l.label << " = " << io::format_double(l.value);
      if (std::isfinite(l.limit)) std::cout << " (limit " << io::format_double(l.limit) << ")";
      if (!l.passed) std::cout << " FAILED";
      if (!l.note.empty()) std::cout << " [" << l.note << "]";
      std::cout << '\n';
    }
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << std::endl;
    ok = ok && r.passed();
  }
  return ok ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decay and regularity experiments for inhomogeneous incompressible flow"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ConfigArgs sim_args;
  std::string manifest;
  int workers = 0;
  auto* sim = app.add_subcommand("simulate", "run configured simulations into per-run directories");
  sim_args.attach(sim);
  sim->add_option("--manifest", manifest, "file listing config paths, one job each")->check(CLI::ExistingFile);
  sim->add_option("-j,--workers", workers, "worker threads (default run.workers)")->check(CLI::PositiveNumber);

  std::string run_dir;
  std::optional<double> t_lo, t_hi;
  auto* fit = app.add_subcommand("decay_fit", "refit decay exponents of a finished run");
  fit->add_option("run_dir", run_dir, "run directory")->required()->check(CLI::ExistingDirectory);
  fit->add_option("--t-lo", t_lo, "fit window start");
  fit->add_option("--t-hi", t_hi, "fit window end");

  std::string field_file, spec_text = "log:1.5", component = "rho";
  auto* bn = app.add_subcommand("besov_norm", "Besov norm of a snapshot field");
  bn->add_option("field_file", field_file, "snapshot file")->required()->check(CLI::ExistingFile);
  bn->add_option("--spec", spec_text, "log:ETA or classical:S,P,R")->capture_default_str();
  bn->add_option("--component", component, "rho (rho - 1), u1, u2 or vorticity")
      ->check(CLI::IsMember({"rho", "u1", "u2", "vorticity"}))
      ->capture_default_str();

  ConfigArgs tr_args;
  auto* tr = app.add_subcommand("transport_reg", "dyadic block transport growth experiment");
  tr_args.attach(tr);

  ConfigArgs sm_args;
  auto* sm = app.add_subcommand("check_smallness", "K, G and the smallness condition (exit 1 if violated)");
  sm_args.attach(sm);

  std::vector<std::string> suites;
  std::uint64_t seed = 1;
  std::string gamma_file = std::string(INSDECAY_DATA_DIR) + "/lemma23_gamma.txt";
  bool refit = false;
  auto* vi = app.add_subcommand("verify_inequalities", "numerical checks of the inequality suites");
  std::vector<std::string> choices = suite_names();
  choices.push_back("all");
  vi->add_option("suite", suites, "suites to run (default all)")->check(CLI::IsMember(choices));
  vi->add_option("--seed", seed, "ensemble seed")->capture_default_str();
  vi->add_option("--gamma-file", gamma_file, "fitted gamma constants")->capture_default_str();
  vi->add_flag("--refit", refit, "refit the gamma constants and overwrite the file first");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(sim_args, manifest, workers);
    if (*fit) return cmd_decay_fit(run_dir, t_lo, t_hi);
    if (*bn) return cmd_besov_norm(field_file, spec_text, component);
    if (*tr) return cmd_transport(tr_args);
    if (*sm) return cmd_smallness(sm_args);
    if (*vi) return cmd_verify(suites, seed, gamma_file, refit);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
