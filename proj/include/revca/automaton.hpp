#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "revca/error.hpp"
#include "revca/lattice.hpp"
#include "revca/rule.hpp"

namespace revca {

// Field values at one epoch: X on the even sublattice, Y on the odd one, both
// in ascending linear-site order. `epoch` counts two-step updates.
struct AutomatonState {
  LatticeSpec spec;
  std::vector<int> x_values;
  std::vector<int> y_values;
  long epoch = 0;

  void validate() const {
    spec.validate();
    const std::size_t half = spec.cell_count() / 2;
    if (x_values.size() != half || y_values.size() != half)
      throw Error(ErrorCode::invalid_state, "sublattice arrays must each hold " + std::to_string(half) + " values");
    auto in_range = [&](int v) { return v >= 0 && v < spec.modulus; };
    if (!std::all_of(x_values.begin(), x_values.end(), in_range) ||
        !std::all_of(y_values.begin(), y_values.end(), in_range))
      throw Error(ErrorCode::invalid_state, "field value outside [0, modulus)");
  }

  friend bool operator==(const AutomatonState&, const AutomatonState&) = default;
};

inline AutomatonState zero_state(const LatticeSpec& spec) {
  const std::size_t half = spec.cell_count() / 2;
  return {spec, std::vector<int>(half, 0), std::vector<int>(half, 0), 0};
}

template <class Engine>
AutomatonState random_state(const LatticeSpec& spec, Engine& engine) {
  AutomatonState s = zero_state(spec);
  std::uniform_int_distribution<int> dist(0, spec.modulus - 1);
  for (auto& v : s.x_values) v = dist(engine);
  for (auto& v : s.y_values) v = dist(engine);
  return s;
}

// Reversible second-order automaton: each half-step adds Q(opposite-sublattice
// neighbors) mod N to one sublattice. One epoch applies the odd (Y) update
// first and then the even (X) update, matching U = A * B acting on kets.
class Automaton {
 public:
  Automaton(LatticeSpec spec, RuleSpec rule)
      : geo_(std::move(spec)), rule_(std::move(rule), geo_.spec().modulus, geo_.arity()) {
    const std::size_t half = geo_.sublattice_size();
    const std::size_t k = geo_.arity();
    even_nbr_.resize(half * k);
    odd_nbr_.resize(half * k);
    for (std::size_t i = 0; i < half; ++i) {
      auto ne = geo_.neighbors(geo_.even_sites()[i]);
      auto no = geo_.neighbors(geo_.odd_sites()[i]);
      for (std::size_t j = 0; j < k; ++j) {
        even_nbr_[i * k + j] = geo_.slot(ne[j]);
        odd_nbr_[i * k + j] = geo_.slot(no[j]);
      }
    }
  }

  const Geometry& geometry() const { return geo_; }
  const Rule& rule() const { return rule_; }
  const LatticeSpec& spec() const { return geo_.spec(); }

  int value_at(const AutomatonState& s, std::size_t site) const {
    const std::size_t slot = geo_.slot(site);
    return geo_.is_even(site) ? s.x_values[slot] : s.y_values[slot];
  }

  std::vector<int> neighbor_tuple(const AutomatonState& s, const Coord& site) const {
    const std::size_t idx = geo_.index_of(site);
    std::vector<int> out;
    out.reserve(geo_.arity());
    for (std::size_t n : geo_.neighbors(idx)) out.push_back(value_at(s, n));
    return out;
  }

  AutomatonState half_step_even(AutomatonState s) const {
    update(s.x_values, s.y_values, even_nbr_, +1);
    return s;
  }
  AutomatonState half_step_odd(AutomatonState s) const {
    update(s.y_values, s.x_values, odd_nbr_, +1);
    return s;
  }
  AutomatonState half_step_even_inverse(AutomatonState s) const {
    update(s.x_values, s.y_values, even_nbr_, -1);
    return s;
  }
  AutomatonState half_step_odd_inverse(AutomatonState s) const {
    update(s.y_values, s.x_values, odd_nbr_, -1);
    return s;
  }

  AutomatonState step_epoch(AutomatonState s) const {
    update(s.y_values, s.x_values, odd_nbr_, +1);
    update(s.x_values, s.y_values, even_nbr_, +1);
    ++s.epoch;
    return s;
  }

  AutomatonState step_epoch_inverse(AutomatonState s) const {
    update(s.x_values, s.y_values, even_nbr_, -1);
    update(s.y_values, s.x_values, odd_nbr_, -1);
    --s.epoch;
    return s;
  }

  AutomatonState run(AutomatonState s, long epochs) const {
    for (long e = 0; e < epochs; ++e) s = step_epoch(std::move(s));
    return s;
  }
  AutomatonState run_inverse(AutomatonState s, long epochs) const {
    for (long e = 0; e < epochs; ++e) s = step_epoch_inverse(std::move(s));
    return s;
  }

  void check(const AutomatonState& s) const {
    s.validate();
    if (!(s.spec == geo_.spec()))
      throw Error(ErrorCode::invalid_state, "state lattice does not match automaton lattice");
  }

 private:
  // All targets read only `source`, so the update order within a half-step is
  // irrelevant.
  void update(std::vector<int>& target, const std::vector<int>& source, const std::vector<std::size_t>& nbr,
              int sign) const {
    const int n = rule_.modulus();
    const std::size_t k = geo_.arity();
    std::vector<int> tuple(k);
    for (std::size_t i = 0; i < target.size(); ++i) {
      for (std::size_t j = 0; j < k; ++j) tuple[j] = source[nbr[i * k + j]];
      const int q = rule_(tuple);
      target[i] = ((target[i] + sign * q) % n + n) % n;
    }
  }

  Geometry geo_;
  Rule rule_;
  std::vector<std::size_t> even_nbr_;
  std::vector<std::size_t> odd_nbr_;
};

struct DirectionExtent {
  std::vector<int> direction;  // integer direction, unnormalized
  double extent = 0.0;         // max projection of a changed cell onto the unit direction
};

struct DiffPatternReport {
  std::vector<Coord> changed_cells;
  Coord perturb_site;
  long epochs = 0;
  int support_radius = 0;
  std::vector<DirectionExtent> direction_extents;
  // max / min direction extent; +inf when some direction has zero extent while
  // another does not, 1 for a point-like pattern.
  double anisotropy_ratio = 1.0;
  bool within_light_cone = true;
};

// Axis directions (+/- each axis) and, for D >= 2, every diagonal (+/-1, ...).
inline std::vector<std::vector<int>> probe_directions(std::size_t dims) {
  std::vector<std::vector<int>> dirs;
  for (std::size_t axis = 0; axis < dims; ++axis) {
    for (int sign : {-1, 1}) {
      std::vector<int> d(dims, 0);
      d[axis] = sign;
      dirs.push_back(d);
    }
  }
  if (dims >= 2) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << dims); ++mask) {
      std::vector<int> d(dims);
      for (std::size_t axis = 0; axis < dims; ++axis) d[axis] = (mask >> axis) & 1 ? 1 : -1;
      dirs.push_back(d);
    }
  }
  return dirs;
}

// Evolves `seed_state` with and without a one-site perturbation and reports
// where the two runs differ after `epochs` epochs.
inline DiffPatternReport difference_pattern(const Automaton& automaton, const AutomatonState& seed_state,
                                            const Coord& perturb_site, int perturb_delta, long epochs) {
  automaton.check(seed_state);
  const Geometry& geo = automaton.geometry();
  const int n = geo.spec().modulus;
  const std::size_t origin = geo.index_of(perturb_site);
  const int delta = ((perturb_delta % n) + n) % n;
  if (delta == 0)
    throw Error(ErrorCode::degenerate_perturbation,
                "perturbation " + std::to_string(perturb_delta) + " vanishes modulo " + std::to_string(n));
  if (epochs < 0) throw Error(ErrorCode::invalid_config, "epochs must be non-negative");

  AutomatonState perturbed = seed_state;
  auto& field = geo.is_even(origin) ? perturbed.x_values : perturbed.y_values;
  field[geo.slot(origin)] = (field[geo.slot(origin)] + delta) % n;

  const AutomatonState a = automaton.run(seed_state, epochs);
  const AutomatonState b = automaton.run(perturbed, epochs);

  DiffPatternReport report;
  report.perturb_site = perturb_site;
  report.epochs = epochs;
  const auto dirs = probe_directions(geo.spec().dims());
  std::vector<double> extents(dirs.size(), 0.0);
  for (std::size_t site = 0; site < geo.cell_count(); ++site) {
    if (automaton.value_at(a, site) == automaton.value_at(b, site)) continue;
    report.changed_cells.push_back(geo.coord_of(site));
    const Coord disp = geo.displacement(origin, site);
    int l1 = 0;
    for (int c : disp) l1 += std::abs(c);
    report.support_radius = std::max(report.support_radius, l1);
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      double dot = 0.0, norm2 = 0.0;
      for (std::size_t axis = 0; axis < disp.size(); ++axis) {
        dot += static_cast<double>(disp[axis]) * dirs[k][axis];
        norm2 += static_cast<double>(dirs[k][axis]) * dirs[k][axis];
      }
      extents[k] = std::max(extents[k], dot / std::sqrt(norm2));
    }
  }
  for (std::size_t k = 0; k < dirs.size(); ++k) report.direction_extents.push_back({dirs[k], extents[k]});
  const auto [lo, hi] = std::minmax_element(extents.begin(), extents.end());
  if (*hi == 0.0)
    report.anisotropy_ratio = 1.0;
  else if (*lo == 0.0)
    report.anisotropy_ratio = std::numeric_limits<double>::infinity();
  else
    report.anisotropy_ratio = *hi / *lo;
  report.within_light_cone = report.support_radius <= 2 * epochs;
  return report;
}

}  // namespace revca
