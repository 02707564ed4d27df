#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "insdecay/config/sim_config.hpp"
#include "insdecay/io/format.hpp"
#include "insdecay/version.hpp"

namespace insdecay::io {

/// Ordered key = value report. The text form is a [report] section followed
/// by the resolved config, so any report can be fed back as a config file.
class Report {
 public:
  explicit Report(std::string kind) { add("kind", std::move(kind)); add("version", kVersion); }

  Report& add(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
    return *this;
  }
  Report& add(const std::string& key, const char* value) { return add(key, std::string(value)); }
  Report& add(const std::string& key, double value) { return add(key, format_double(value)); }
  Report& add(const std::string& key, int value) { return add(key, std::to_string(value)); }
  Report& add(const std::string& key, long value) { return add(key, std::to_string(value)); }
  Report& add(const std::string& key, std::size_t value) { return add(key, std::to_string(value)); }
  Report& add(const std::string& key, bool value) { return add(key, value ? "true" : "false"); }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string value(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
      if (k == key) return v;
    }
    throw Error("report has no key '" + key + "'");
  }

  std::string text(const SimConfig& cfg) const {
    std::string out = "[report]\n";
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out + "\n" + serialize(cfg);
  }

  /// report.txt plus a two-column key,value CSV.
  void write(const std::string& txt_path, const std::string& csv_path, const SimConfig& cfg) const {
    {
      std::ofstream os(txt_path);
      if (!os) throw Error("cannot write " + txt_path);
      os << text(cfg);
    }
    std::ofstream os(csv_path);
    if (!os) throw Error("cannot write " + csv_path);
    os << "key,value\n";
    auto quoted = [](const std::string& v) {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string q = "\"";
      for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    };
    for (const auto& [k, v] : entries_) os << quoted(k) << ',' << quoted(v) << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace insdecay::io
