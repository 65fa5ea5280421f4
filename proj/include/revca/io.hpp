#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "revca/automaton.hpp"
#include "revca/convergence.hpp"
#include "revca/error.hpp"
#include "revca/hamiltonian.hpp"
#include "revca/lift.hpp"
#include "revca/spectral.hpp"

namespace revca {

using Json = nlohmann::ordered_json;

inline Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json to_json(const LatticeSpec& spec) {
  return Json{{"dims", spec.dims()}, {"extents", spec.extents}, {"modulus", spec.modulus}};
}

inline Json to_json(const RuleSpec& rule) {
  Json j{{"family", std::string(to_string(rule.family))}};
  if (rule.family == RuleFamily::seeded_table) j["seed"] = rule.seed;
  if (rule.family == RuleFamily::explicit_table) j["table"] = rule.table;
  return j;
}

inline Json to_json(const AutomatonState& s) {
  return Json{{"lattice", to_json(s.spec)}, {"epoch", s.epoch}, {"x_values", s.x_values}, {"y_values", s.y_values}};
}

inline Json to_json(const DiffPatternReport& r) {
  Json extents = Json::array();
  for (const auto& e : r.direction_extents) extents.push_back(Json{{"direction", e.direction}, {"extent", e.extent}});
  return Json{{"perturb_site", r.perturb_site},
              {"epochs", r.epochs},
              {"single_steps", 2 * r.epochs},
              {"changed_count", r.changed_cells.size()},
              {"support_radius", r.support_radius},
              {"light_cone_bound", 2 * r.epochs},
              {"within_light_cone", r.within_light_cone},
              {"anisotropy_ratio", finite_or_null(r.anisotropy_ratio)},
              {"direction_extents", extents},
              {"changed_cells", r.changed_cells}};
}

// Dense operator: row-major [re, im] pairs.
inline Json operator_to_json(const DenseOperator& op) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < op.rows(); ++i)
    for (Eigen::Index j = 0; j < op.cols(); ++j) entries.push_back(Json::array({op(i, j).real(), op(i, j).imag()}));
  return Json{{"dim", op.rows()}, {"convention", std::string(OntologicalBasis::convention())}, {"entries", entries}};
}

inline DenseOperator operator_from_json(const Json& j) {
  try {
    const auto dim = j.at("dim").get<Eigen::Index>();
    const auto& entries = j.at("entries");
    if (dim <= 0 || entries.size() != static_cast<std::size_t>(dim * dim))
      throw Error(ErrorCode::dimension_mismatch, "operator entries do not form a square matrix of the stated dim");
    DenseOperator op(dim, dim);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index c = 0; c < dim; ++c, ++k) {
        const auto& e = entries[k];
        const Complex v(e.at(0).get<double>(), e.at(1).get<double>());
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw Error(ErrorCode::invalid_config, "operator entry is not finite");
        op(i, c) = v;
      }
    return op;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, std::string("malformed operator JSON: ") + e.what());
  }
}

// `row,col,value` triplets of a real 0/1-style sparse matrix.
inline std::string permutation_to_csv(const DenseOperator& op) {
  std::ostringstream os;
  os << "row,col,value\n";
  for (Eigen::Index j = 0; j < op.cols(); ++j)
    for (Eigen::Index i = 0; i < op.rows(); ++i) {
      if (op(i, j) == Complex(0.0, 0.0)) continue;
      if (op(i, j).imag() != 0.0) throw Error(ErrorCode::invalid_config, "triplet CSV holds real entries only");
      os << i << ',' << j << ',' << op(i, j).real() << '\n';
    }
  return os.str();
}

inline Json to_json(const HamiltonianBundle& b, bool include_operators) {
  Json terms = Json::array();
  for (const auto& t : b.local_terms) {
    Json term{{"site", t.site},
              {"order", t.order},
              {"norm", t.op.norm()},
              {"support", std::vector<std::size_t>(t.support.touched.begin(), t.support.touched.end())},
              {"controls", std::vector<std::size_t>(t.support.controls.begin(), t.support.controls.end())}};
    if (include_operators) term["operator"] = operator_to_json(t.op);
    terms.push_back(std::move(term));
  }
  Json j{{"order", b.order},
         {"dim", b.H_truncated.rows()},
         {"convention", std::string(OntologicalBasis::convention())},
         {"units", "hbar = 1, single time step = 1; U spans two steps, U = exp(-2iH)"},
         {"branch_offsets", b.branch_offsets},
         {"local_terms", terms}};
  if (include_operators) {
    j["H_truncated"] = operator_to_json(b.H_truncated);
    j["H_exact"] = operator_to_json(b.H_exact);
  }
  return j;
}

inline Json to_json(const ConvergenceReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points)
    pts.push_back(Json{{"eps", p.eps},
                       {"truncation_errors", p.truncation_errors},
                       {"principal_spread", p.principal_spread},
                       {"continued_spread", p.continued_spread},
                       {"divergent", p.divergent}});
  return Json{{"orders", r.orders},
              {"error_norm", "Frobenius"},
              {"divergence_threshold", kTwoPi},
              {"divergence_onset", r.divergence_onset ? Json(*r.divergence_onset) : Json(nullptr)},
              {"points", pts}};
}

inline Json to_json(const SpectrumReport& r) {
  return Json{{"units", "inverse single time steps"},
              {"ground_energy_exact", r.ground_energy_exact},
              {"ground_energy_truncated", r.ground_energy_truncated},
              {"gap_exact", r.gap_exact},
              {"gap_truncated", r.gap_truncated},
              {"ground_degeneracy_exact", r.ground_degeneracy_exact},
              {"max_residual_exact", r.max_residual_exact},
              {"max_residual_truncated", r.max_residual_truncated},
              {"site_min_eigenvalues", r.site_min_eigenvalues},
              {"density_bound", r.density_bound},
              {"h", r.h},
              {"volume", r.volume},
              {"h_times_volume", r.h * static_cast<double>(r.volume)},
              {"bound_holds", r.bound_holds},
              {"exact_eigenvalues", r.exact_eigenvalues},
              {"truncated_eigenvalues", r.truncated_eigenvalues}};
}

inline Json to_json(const CycleOracle& o) {
  return Json{{"cycle_count", o.cycle_lengths.size()},
              {"cycle_lengths", o.cycle_lengths},
              {"predicted_phases", o.predicted_phases}};
}

inline Json to_json(const EntanglementReport& r) {
  return Json{{"entropy", r.entropy},
              {"log_base", EntanglementReport::log_base},
              {"upper_bound", r.upper_bound},
              {"ground_energy", r.ground_energy},
              {"ground_degeneracy", r.ground_degeneracy},
              {"representative_dependent", r.representative_dependent},
              {"representative_seed", r.representative_seed},
              {"schmidt_probabilities", r.schmidt_probabilities}};
}

inline std::string eigenvalues_to_csv(const std::vector<double>& values) {
  std::ostringstream os;
  os.precision(17);
  os << "index,eigenvalue\n";
  for (std::size_t i = 0; i < values.size(); ++i) os << i << ',' << values[i] << '\n';
  return os.str();
}

inline std::string axis_name(std::size_t axis) {
  static const char* names[] = {"x", "y", "z", "w"};
  return axis < 4 ? names[axis] : "x" + std::to_string(axis);
}

// One row per site in linear order: coordinates then value.
inline std::string state_to_csv(const Automaton& automaton, const AutomatonState& s) {
  const Geometry& geo = automaton.geometry();
  std::ostringstream os;
  for (std::size_t a = 0; a < geo.spec().dims(); ++a) os << axis_name(a) << ',';
  os << "value\n";
  for (std::size_t site = 0; site < geo.cell_count(); ++site) {
    for (int c : geo.coord_of(site)) os << c << ',';
    os << automaton.value_at(s, site) << '\n';
  }
  return os.str();
}

// Binary PGM (P5, maxval 255) of a 1D or 2D field, values scaled by 255/(N-1).
// Axis 0 runs along rows.
inline std::string field_to_pgm(const LatticeSpec& spec, const std::vector<int>& by_site) {
  if (spec.dims() > 2) throw Error(ErrorCode::invalid_config, "PGM output needs a 1D or 2D lattice");
  const int width = spec.extents[0];
  const int height = spec.dims() == 2 ? spec.extents[1] : 1;
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  for (int v : by_site)
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v / (spec.modulus - 1)))));
  return out;
}

inline std::vector<int> field_by_site(const Automaton& automaton, const AutomatonState& s) {
  std::vector<int> out(automaton.geometry().cell_count());
  for (std::size_t site = 0; site < out.size(); ++site) out[site] = automaton.value_at(s, site);
  return out;
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::io_error, "failed writing '" + path + "'");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace revca
