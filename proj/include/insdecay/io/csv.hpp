#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "insdecay/io/format.hpp"
#include "insdecay/solver/integrator.hpp"

namespace insdecay::io {

inline constexpr const char* kDiagnosticsHeader =
    "t,l2_u,l2_grad_u,l2_ut,p_div,q_div_minus_gradpi,min_rho,max_rho,energy";

/// Generic CSV table: header plus rows of doubles.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw Error("table has no column '" + name + "'");
  }
  std::vector<double> values(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(c));
    return out;
  }
};

inline void write_table(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << '\n';
  }
}

inline void write_table(const std::string& path, const Table& t) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  write_table(os, t);
}

inline Table read_table(std::istream& is, const std::string& what = "csv") {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw Error(what + ": empty file");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      t.columns.push_back(cell);
    }
  }
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(parse_double(cell));
      } catch (const Error& e) {
        throw Error(what + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
    if (row.size() != t.columns.size()) {
      throw Error(what + ":" + std::to_string(lineno) + ": expected " +
                  std::to_string(t.columns.size()) + " fields, got " + std::to_string(row.size()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table read_table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read " + path);
  return read_table(is, path);
}

inline Table diagnostics_table(const std::vector<Diagnostics>& d) {
  Table t;
  std::stringstream ss(kDiagnosticsHeader);
  std::string c;
  while (std::getline(ss, c, ',')) t.columns.push_back(c);
  for (const auto& x : d) {
    t.rows.push_back({x.t, x.l2_u, x.l2_grad_u, x.l2_ut, x.p_div, x.q_div_minus_gradpi, x.min_rho,
                      x.max_rho, x.energy});
  }
  return t;
}

/// Inverse of diagnostics_table for the schema columns; other fields stay 0.
inline std::vector<Diagnostics> diagnostics_from_table(const Table& t) {
  const std::size_t c[9] = {t.column("t"),        t.column("l2_u"),    t.column("l2_grad_u"),
                            t.column("l2_ut"),    t.column("p_div"),   t.column("q_div_minus_gradpi"),
                            t.column("min_rho"),  t.column("max_rho"), t.column("energy")};
  std::vector<Diagnostics> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    Diagnostics d;
    d.t = r.at(c[0]);
    d.l2_u = r.at(c[1]);
    d.l2_grad_u = r.at(c[2]);
    d.l2_ut = r.at(c[3]);
    d.p_div = r.at(c[4]);
    d.q_div_minus_gradpi = r.at(c[5]);
    d.min_rho = r.at(c[6]);
    d.max_rho = r.at(c[7]);
    d.energy = r.at(c[8]);
    out.push_back(d);
  }
  return out;
}

inline void write_diagnostics(const std::string& path, const std::vector<Diagnostics>& d) {
  write_table(path, diagnostics_table(d));
}

/// Two whitespace-separated columns, one sample per line.
inline void write_dat(const std::string& path, const std::vector<double>& x,
                      const std::vector<double>& y, const std::string& comment = {}) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  if (!comment.empty()) os << "# " << comment << '\n';
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    os << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
  }
}

}  // namespace insdecay::io
