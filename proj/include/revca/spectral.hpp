#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "revca/automaton.hpp"
#include "revca/error.hpp"
#include "revca/hamiltonian.hpp"
#include "revca/lift.hpp"
#include "revca/linalg.hpp"

namespace revca {

struct CycleOracle {
  std::vector<std::size_t> cycle_lengths;  // in order of each cycle's smallest basis index
  std::vector<double> predicted_phases;    // ascending, in [0, 2 pi)
};

// Cycle structure of the classical epoch map over every basis configuration,
// computed with the classical engine alone. Each length-c cycle contributes
// the phases 2 pi m / c, m = 0..c-1, to the spectrum of U.
inline CycleOracle classical_cycle_decomposition(const OntologicalBasis& basis, const Automaton& automaton) {
  require_matching(basis, automaton);
  CycleOracle oracle;
  std::vector<bool> visited(basis.dim(), false);
  for (std::size_t start = 0; start < basis.dim(); ++start) {
    if (visited[start]) continue;
    std::size_t length = 0;
    AutomatonState s = basis.decode(start);
    std::size_t idx = start;
    do {
      visited[idx] = true;
      ++length;
      s = automaton.step_epoch(std::move(s));
      idx = basis.encode(s);
    } while (idx != start);
    oracle.cycle_lengths.push_back(length);
    for (std::size_t m = 0; m < length; ++m)
      oracle.predicted_phases.push_back(kTwoPi * static_cast<double>(m) / static_cast<double>(length));
  }
  std::sort(oracle.predicted_phases.begin(), oracle.predicted_phases.end());
  return oracle;
}

// Eigenphases of a unitary in [0, 2 pi), ascending; phases within `snap` of
// 2 pi are folded to 0.
inline std::vector<double> unitary_eigenphases(const DenseOperator& u, double snap = 1e-9) {
  const auto tol = ToleranceContext::for_dim(static_cast<std::size_t>(u.rows()));
  const NormalEigen eig = normal_eigen(u, tol.abs_tol);
  std::vector<double> out;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    double t = std::fmod(std::arg(eig.values[k]), kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t > kTwoPi - snap) t = 0.0;
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct SpectrumReport {
  std::vector<double> exact_eigenvalues;      // ascending
  std::vector<double> truncated_eigenvalues;  // ascending
  double ground_energy_exact = 0.0;
  double ground_energy_truncated = 0.0;
  double gap_exact = 0.0;  // first distinct level above the ground level (0 if none)
  double gap_truncated = 0.0;
  std::size_t ground_degeneracy_exact = 0;
  double max_residual_exact = 0.0;
  double max_residual_truncated = 0.0;
  std::vector<double> site_min_eigenvalues;  // min eig of the full local density per site
  double density_bound = 0.0;                // sum over sites of site_min_eigenvalues
  double h = 0.0;                            // smallest site minimum
  std::size_t volume = 0;                    // site count
  bool bound_holds = true;                   // density_bound <= ground_energy_truncated
};

namespace detail {
inline void level_stats(const Eigen::VectorXd& ev, double tol, double& gap, std::size_t& degeneracy) {
  gap = 0.0;
  degeneracy = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev[k] <= ev[0] + tol) {
      ++degeneracy;
    } else {
      gap = ev[k] - ev[0];
      break;
    }
  }
}
}  // namespace detail

inline SpectrumReport spectrum(const HamiltonianBundle& bundle, std::size_t site_count) {
  SpectrumReport r;
  const auto tol = ToleranceContext::for_dim(static_cast<std::size_t>(bundle.H_exact.rows()));
  const HermitianEigen ex = hermitian_eigen(bundle.H_exact);
  const HermitianEigen tr = hermitian_eigen(bundle.H_truncated);
  r.exact_eigenvalues.assign(ex.values.data(), ex.values.data() + ex.values.size());
  r.truncated_eigenvalues.assign(tr.values.data(), tr.values.data() + tr.values.size());
  if (ex.values.size() == 0) return r;
  r.ground_energy_exact = ex.values[0];
  r.ground_energy_truncated = tr.values[0];
  std::size_t deg_tr = 0;
  detail::level_stats(ex.values, 1e-8, r.gap_exact, r.ground_degeneracy_exact);
  detail::level_stats(tr.values, 1e-8, r.gap_truncated, deg_tr);
  r.max_residual_exact = eigen_residual(bundle.H_exact, ex.values.cast<Complex>(), ex.vectors);
  r.max_residual_truncated = eigen_residual(bundle.H_truncated, tr.values.cast<Complex>(), tr.vectors);

  r.volume = site_count;
  for (std::size_t x = 0; x < site_count; ++x) {
    const auto ev = hermitian_eigen(bundle.density(x)).values;
    r.site_min_eigenvalues.push_back(ev.size() ? ev[0] : 0.0);
  }
  for (double m : r.site_min_eigenvalues) r.density_bound += m;
  r.h = r.site_min_eigenvalues.empty() ? 0.0
                                       : *std::min_element(r.site_min_eigenvalues.begin(), r.site_min_eigenvalues.end());
  const double scale = std::max(1.0, std::abs(r.ground_energy_truncated));
  r.bound_holds = r.density_bound <= r.ground_energy_truncated + tol.abs_tol * scale;
  return r;
}

struct EntanglementReport {
  double entropy = 0.0;  // von Neumann entropy of the reduced state, natural log
  double upper_bound = 0.0;  // min(|A|, |B|) * log N
  std::size_t ground_degeneracy = 0;
  bool representative_dependent = false;  // degenerate ground space
  std::size_t representative_seed = 0;    // basis index projected onto the ground space
  double ground_energy = 0.0;
  std::vector<double> schmidt_probabilities;  // descending
  static constexpr const char* log_base = "natural (nats)";
};

// Entanglement entropy of the ground state of H across the cut `region_a` vs
// its complement. For a degenerate ground space the representative is the
// projection of the first basis vector with nonvanishing overlap.
inline EntanglementReport vacuum_entanglement(const OntologicalBasis& basis, const DenseOperator& h,
                                              const std::vector<Coord>& region_a) {
  const Geometry& geo = basis.geometry();
  std::set<std::size_t> a_sites;
  for (const auto& c : region_a) {
    std::size_t idx = 0;
    try {
      idx = geo.index_of(c);
    } catch (const Error& e) {
      throw Error(ErrorCode::invalid_cut, std::string("cut site invalid: ") + e.what());
    }
    if (!a_sites.insert(idx).second) throw Error(ErrorCode::invalid_cut, "cut lists a site twice");
  }
  if (a_sites.empty() || a_sites.size() >= geo.cell_count())
    throw Error(ErrorCode::invalid_cut, "cut must split the lattice into two non-empty parts");
  require_square(h, "hamiltonian");
  if (static_cast<std::size_t>(h.rows()) != basis.dim())
    throw Error(ErrorCode::dimension_mismatch, "hamiltonian does not match the basis dimension");

  std::vector<std::size_t> sites_a(a_sites.begin(), a_sites.end()), sites_b;
  for (std::size_t s = 0; s < geo.cell_count(); ++s)
    if (!a_sites.count(s)) sites_b.push_back(s);

  const HermitianEigen eig = hermitian_eigen(h);
  EntanglementReport rep;
  rep.ground_energy = eig.values[0];
  Eigen::Index g = 0;
  while (g < eig.values.size() && eig.values[g] <= eig.values[0] + 1e-8) ++g;
  rep.ground_degeneracy = static_cast<std::size_t>(g);
  rep.representative_dependent = g > 1;
  const DenseOperator ground = eig.vectors.leftCols(g);

  Eigen::VectorXcd psi;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const Eigen::VectorXcd overlap = ground.row(static_cast<Eigen::Index>(i)).adjoint();
    if (overlap.norm() > 1e-6) {
      psi = ground * overlap;
      psi.normalize();
      rep.representative_seed = i;
      break;
    }
  }

  const auto n = static_cast<std::size_t>(basis.modulus());
  auto sub_index = [&](std::size_t full, const std::vector<std::size_t>& sites) {
    std::size_t idx = 0;
    for (std::size_t k = sites.size(); k-- > 0;) idx = idx * n + static_cast<std::size_t>(basis.value(full, sites[k]));
    return idx;
  };
  std::size_t dim_a = 1, dim_b = 1;
  for (std::size_t k = 0; k < sites_a.size(); ++k) dim_a *= n;
  for (std::size_t k = 0; k < sites_b.size(); ++k) dim_b *= n;
  DenseOperator amp = DenseOperator::Zero(static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_b));
  for (std::size_t i = 0; i < basis.dim(); ++i)
    amp(static_cast<Eigen::Index>(sub_index(i, sites_a)), static_cast<Eigen::Index>(sub_index(i, sites_b))) =
        psi[static_cast<Eigen::Index>(i)];

  Eigen::JacobiSVD<DenseOperator> svd(amp);
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    const double p = svd.singularValues()[k] * svd.singularValues()[k];
    rep.schmidt_probabilities.push_back(p);
    if (p > 1e-300) rep.entropy -= p * std::log(p);
  }
  rep.entropy = std::max(rep.entropy, 0.0);
  rep.upper_bound = static_cast<double>(std::min(sites_a.size(), sites_b.size())) * std::log(double(n));
  return rep;
}

// U^{-k} B U^{k} for the site-value beable B. U is a real permutation, so the
// products are exact.
inline DenseOperator heisenberg_beable(const OntologicalBasis& basis, const Evolution& evo, const Coord& site,
                                       int epochs) {
  DenseOperator b = site_value_beable(basis, basis.geometry().index_of(site));
  const DenseOperator u_inv = evo.U.adjoint();
  for (int k = 0; k < epochs; ++k) b = u_inv * b * evo.U;
  for (int k = 0; k > epochs; --k) b = evo.U * b * u_inv;
  return b;
}

}  // namespace revca
