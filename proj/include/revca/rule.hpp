#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "revca/error.hpp"

namespace revca {

enum class RuleFamily { linear_sum, seeded_table, explicit_table };

inline std::string_view to_string(RuleFamily f) {
  switch (f) {
    case RuleFamily::linear_sum: return "linear-sum";
    case RuleFamily::seeded_table: return "seeded-table";
    case RuleFamily::explicit_table: return "explicit-table";
  }
  return "unknown";
}

inline RuleFamily parse_rule_family(std::string_view s) {
  if (s == "linear-sum") return RuleFamily::linear_sum;
  if (s == "seeded-table") return RuleFamily::seeded_table;
  if (s == "explicit-table") return RuleFamily::explicit_table;
  throw Error(ErrorCode::invalid_rule, "unknown rule family '" + std::string(s) + "'");
}

// Description of the update function Q. Tables are indexed lexicographically
// by the neighbor tuple in the lattice's fixed neighbor order, first element
// most significant.
struct RuleSpec {
  RuleFamily family = RuleFamily::linear_sum;
  std::uint64_t seed = 0;
  std::vector<int> table;

  static RuleSpec linear_sum() { return {}; }
  static RuleSpec seeded(std::uint64_t seed) { return {RuleFamily::seeded_table, seed, {}}; }
  static RuleSpec explicit_table(std::vector<int> table) {
    return {RuleFamily::explicit_table, 0, std::move(table)};
  }
  // Q == 0 for the given modulus and arity (2 * dims).
  static RuleSpec zero(int modulus, std::size_t arity);

  friend bool operator==(const RuleSpec&, const RuleSpec&) = default;
};

inline std::size_t table_size(int modulus, std::size_t arity) {
  constexpr std::size_t kMaxTable = std::size_t{1} << 26;
  std::size_t size = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    size *= static_cast<std::size_t>(modulus);
    if (size > kMaxTable)
      throw Error(ErrorCode::invalid_rule, "rule table for modulus " + std::to_string(modulus) +
                                               " and arity " + std::to_string(arity) + " is too large");
  }
  return size;
}

inline RuleSpec RuleSpec::zero(int modulus, std::size_t arity) {
  return explicit_table(std::vector<int>(table_size(modulus, arity), 0));
}

// A RuleSpec bound to a modulus and arity, ready for evaluation.
class Rule {
 public:
  Rule(RuleSpec spec, int modulus, std::size_t arity)
      : spec_(std::move(spec)), modulus_(modulus), arity_(arity) {
    if (modulus_ < 2) throw Error(ErrorCode::invalid_modulus, "modulus must be >= 2");
    switch (spec_.family) {
      case RuleFamily::linear_sum:
        break;
      case RuleFamily::seeded_table: {
        table_.resize(table_size(modulus_, arity_));
        std::mt19937_64 engine(spec_.seed);
        for (auto& v : table_) v = static_cast<int>(engine() % static_cast<std::uint64_t>(modulus_));
        break;
      }
      case RuleFamily::explicit_table: {
        const std::size_t expected = table_size(modulus_, arity_);
        if (spec_.table.size() != expected)
          throw Error(ErrorCode::invalid_rule, "explicit table has " + std::to_string(spec_.table.size()) +
                                                   " entries, expected " + std::to_string(expected));
        for (int v : spec_.table) {
          if (v < 0 || v >= modulus_)
            throw Error(ErrorCode::invalid_rule,
                        "table value " + std::to_string(v) + " outside [0, modulus)");
        }
        table_ = spec_.table;
        break;
      }
    }
  }

  const RuleSpec& spec() const { return spec_; }
  int modulus() const { return modulus_; }
  std::size_t arity() const { return arity_; }

  std::size_t tuple_index(std::span<const int> tuple) const {
    std::size_t idx = 0;
    for (int v : tuple) idx = idx * static_cast<std::size_t>(modulus_) + static_cast<std::size_t>(v);
    return idx;
  }

  int operator()(std::span<const int> tuple) const {
    if (spec_.family == RuleFamily::linear_sum) {
      long sum = 0;
      for (int v : tuple) sum += v;
      return static_cast<int>(sum % modulus_);
    }
    return table_[tuple_index(tuple)];
  }

  // True when Q is constant, i.e. no site ever reacts to its neighbors.
  bool is_uncoupled() const {
    if (spec_.family == RuleFamily::linear_sum) return false;
    for (int v : table_)
      if (v != table_.front()) return false;
    return true;
  }

  // Full lookup table in lexicographic tuple order (materialized on demand for
  // linear-sum).
  std::vector<int> materialize() const {
    if (spec_.family != RuleFamily::linear_sum) return table_;
    std::vector<int> out(table_size(modulus_, arity_));
    std::vector<int> tuple(arity_, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = (*this)(tuple);
      for (std::size_t k = arity_; k-- > 0;) {
        if (++tuple[k] < modulus_) break;
        tuple[k] = 0;
      }
    }
    return out;
  }

 private:
  RuleSpec spec_;
  int modulus_;
  std::size_t arity_;
  std::vector<int> table_;
};

// Text form of a table: one `v0,v1,...,vk -> value` line per tuple in
// lexicographic order. Parsing accepts any order, optional parentheses, comma
// or whitespace separators and `#` comments, but every tuple must appear once.
inline std::string format_rule_table(const Rule& rule) {
  std::ostringstream os;
  const auto table = rule.materialize();
  std::vector<int> tuple(rule.arity(), 0);
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t k = 0; k < tuple.size(); ++k) os << (k ? "," : "") << tuple[k];
    os << " -> " << table[i] << '\n';
    for (std::size_t k = tuple.size(); k-- > 0;) {
      if (++tuple[k] < rule.modulus()) break;
      tuple[k] = 0;
    }
  }
  return os.str();
}

inline RuleSpec parse_rule_table(std::string_view text, int modulus, std::size_t arity) {
  const std::size_t size = table_size(modulus, arity);
  std::vector<int> table(size, -1);
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::invalid_rule, "rule table line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) fail("missing '->'");
    std::string lhs = line.substr(0, arrow);
    for (char& ch : lhs)
      if (ch == ',' || ch == '(' || ch == ')') ch = ' ';
    std::istringstream lhs_in(lhs), rhs_in(line.substr(arrow + 2));
    std::vector<int> tuple;
    for (int v; lhs_in >> v;) tuple.push_back(v);
    if (!lhs_in.eof()) fail("malformed tuple");
    int value = 0;
    if (!(rhs_in >> value)) fail("malformed value");
    if (tuple.size() != arity) fail("tuple has " + std::to_string(tuple.size()) + " entries, expected " +
                                    std::to_string(arity));
    std::size_t idx = 0;
    for (int v : tuple) {
      if (v < 0 || v >= modulus) fail("tuple entry out of range");
      idx = idx * static_cast<std::size_t>(modulus) + static_cast<std::size_t>(v);
    }
    if (value < 0 || value >= modulus) fail("value out of range");
    if (table[idx] != -1) fail("duplicate tuple");
    table[idx] = value;
  }
  for (int v : table)
    if (v < 0) throw Error(ErrorCode::invalid_rule, "rule table does not cover every neighbor tuple");
  return RuleSpec::explicit_table(std::move(table));
}

inline RuleSpec load_rule_table(const std::string& path, int modulus, std::size_t arity) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open rule table '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rule_table(buf.str(), modulus, arity);
}

}  // namespace revca
