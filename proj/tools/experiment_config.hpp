#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "revca/revca.hpp"

namespace revca::cli {

// Flat `section.key -> value` view of an experiment config. Sorted keys make
// the serialized form canonical, so its hash identifies the experiment.
class ExperimentConfig {
 public:
  using Entries = std::map<std::string, std::string>;

  ExperimentConfig() = default;
  explicit ExperimentConfig(Entries e) : entries_(std::move(e)) {}

  static ExperimentConfig preset(const std::string& name);
  static ExperimentConfig parse_ini(const std::string& text);
  static ExperimentConfig load(const std::string& path) { return parse_ini(read_file(path)); }

  // Later layers win.
  void merge(const ExperimentConfig& other) {
    for (const auto& [k, v] : other.entries_) entries_[k] = v;
  }

  void set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorCode::usage, "--set expects section.key=value, got '" + assignment + "'");
    entries_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
  }

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  const Entries& entries() const { return entries_; }

  std::string text(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
  }

  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    return parse_long(key, entries_.at(key));
  }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = entries_.at(key);
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_config, key + ": expected a number, got '" + v + "'");
    }
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = entries_.at(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error(ErrorCode::invalid_config, key + ": expected true/false, got '" + v + "'");
  }

  std::vector<long> integers(const std::string& key) const {
    std::vector<long> out;
    for (const auto& item : split(text(key, ""), ',')) out.push_back(parse_long(key, item));
    return out;
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split(text(key, ""), ',')) {
      ExperimentConfig tmp(Entries{{key, item}});
      out.push_back(tmp.real(key, 0.0));
    }
    return out;
  }

  // Rejects keys outside the known schema so typos fail loudly.
  void validate_keys() const;

  std::string to_ini() const {
    std::ostringstream os;
    std::string section;
    for (const auto& [k, v] : entries_) {
      const auto dot = k.find('.');
      const std::string sec = k.substr(0, dot);
      if (sec != section) {
        os << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
        section = sec;
      }
      os << k.substr(dot + 1) << " = " << v << '\n';
    }
    return os.str();
  }

  Json to_json() const {
    Json j = Json::object();
    for (const auto& [k, v] : entries_) {
      const auto dot = k.find('.');
      j[k.substr(0, dot)][k.substr(dot + 1)] = v;
    }
    return j;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
  }

  static std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::istringstream in(s);
    for (std::string item; std::getline(in, item, sep);) out.push_back(trim(item));
    return out;
  }

  static long parse_long(const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      const long x = std::stol(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_config, key + ": expected an integer, got '" + v + "'");
    }
  }

  friend std::vector<Coord> parse_sites(const ExperimentConfig&, const std::string&);

  Entries entries_;
};

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "lattice.extents",     "lattice.modulus",        "rule.family",          "rule.seed",
      "rule.table",          "run.epochs",             "run.seed",             "run.initial",
      "run.dump_every",      "run.inverse",            "perturb.site",         "perturb.delta",
      "lift.cap",            "lift.order",             "lift.branch_offsets",  "lift.shift_offsets",
      "lift.include_operators", "converge.eps",        "converge.orders",      "converge.max_phase_step",
      "converge.p",          "converge.q",             "spectrum.cut",         "classify.operator"};
  return keys;
}

inline void ExperimentConfig::validate_keys() const {
  for (const auto& [k, v] : entries_)
    if (!known_keys().count(k)) throw Error(ErrorCode::invalid_config, "unknown config key '" + k + "'");
}

inline ExperimentConfig ExperimentConfig::parse_ini(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::invalid_config, std::string("config parse error: ") + e.what());
  }
  Entries entries;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw Error(ErrorCode::invalid_config, "config key '" + section + "' must live in a section");
    for (const auto& [key, value] : body) entries[section + "." + key] = trim(value.get_value<std::string>());
  }
  return ExperimentConfig(std::move(entries));
}

inline ExperimentConfig ExperimentConfig::preset(const std::string& name) {
  if (name == "fig2-classical")
    return ExperimentConfig(Entries{{"lattice.extents", "64,64"},
                                    {"lattice.modulus", "5"},
                                    {"rule.family", "seeded-table"},
                                    {"rule.seed", "2009"},
                                    {"run.epochs", "60"},
                                    {"run.seed", "1"},
                                    {"perturb.site", "32,32"},
                                    {"perturb.delta", "1"}});
  if (name == "lift-small")
    return ExperimentConfig(Entries{{"lattice.extents", "4"}, {"lattice.modulus", "2"}, {"rule.family", "linear-sum"}});
  if (name == "lift-medium")
    return ExperimentConfig(Entries{{"lattice.extents", "6"}, {"lattice.modulus", "2"}, {"rule.family", "linear-sum"}});
  throw Error(ErrorCode::usage, "unknown preset '" + name + "' (fig2-classical, lift-small, lift-medium)");
}

// `x,y;x,y;...`
inline std::vector<Coord> parse_sites(const ExperimentConfig& cfg, const std::string& key) {
  std::vector<Coord> out;
  for (const auto& group : ExperimentConfig::split(cfg.text(key, ""), ';')) {
    Coord c;
    for (const auto& item : ExperimentConfig::split(group, ',')) c.push_back(static_cast<int>(ExperimentConfig::parse_long(key, item)));
    out.push_back(std::move(c));
  }
  return out;
}

inline LatticeSpec lattice_of(const ExperimentConfig& cfg) {
  if (!cfg.has("lattice.extents") || !cfg.has("lattice.modulus"))
    throw Error(ErrorCode::invalid_config, "config needs lattice.extents and lattice.modulus");
  LatticeSpec spec;
  for (long e : cfg.integers("lattice.extents")) spec.extents.push_back(static_cast<int>(e));
  spec.modulus = static_cast<int>(cfg.integer("lattice.modulus", 0));
  spec.validate();
  return spec;
}

inline RuleSpec rule_of(const ExperimentConfig& cfg, const LatticeSpec& spec) {
  const RuleFamily family = parse_rule_family(cfg.text("rule.family", "linear-sum"));
  switch (family) {
    case RuleFamily::linear_sum:
      return RuleSpec::linear_sum();
    case RuleFamily::seeded_table: {
      const long seed = cfg.integer("rule.seed", 0);
      if (seed < 0) throw Error(ErrorCode::invalid_config, "rule.seed must be non-negative");
      return RuleSpec::seeded(static_cast<std::uint64_t>(seed));
    }
    case RuleFamily::explicit_table:
      if (!cfg.has("rule.table")) throw Error(ErrorCode::invalid_config, "explicit-table rule needs rule.table");
      return load_rule_table(cfg.text("rule.table", ""), spec.modulus, 2 * spec.dims());
  }
  throw Error(ErrorCode::invalid_rule, "unhandled rule family");
}

inline std::vector<int> int_list(const ExperimentConfig& cfg, const std::string& key) {
  std::vector<int> out;
  for (long v : cfg.integers(key)) out.push_back(static_cast<int>(v));
  return out;
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::internal, "SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace revca::cli
