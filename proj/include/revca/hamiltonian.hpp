#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numeric>
#include <numbers>
#include <set>
#include <tuple>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "revca/bch.hpp"
#include "revca/error.hpp"
#include "revca/lift.hpp"
#include "revca/linalg.hpp"

namespace revca {

// Sites an operator acts on (`touched`) and sites it merely reads as
// diagonal controls (`controls`). Two operators commute whenever neither
// touches a site the other touches or reads.
struct Support {
  std::set<std::size_t> touched;
  std::set<std::size_t> controls;

  static Support of_generator(const Geometry& geo, std::size_t site) {
    Support s;
    s.touched.insert(site);
    for (std::size_t n : geo.neighbors(site)) s.controls.insert(n);
    s.controls.erase(site);
    return s;
  }

  bool may_not_commute(const Support& other) const {
    auto meets = [](const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
      return std::any_of(a.begin(), a.end(), [&](std::size_t x) { return b.count(x) > 0; });
    };
    return meets(touched, other.touched) || meets(touched, other.controls) || meets(controls, other.touched);
  }

  Support joined(const Support& other) const {
    Support s = *this;
    s.touched.insert(other.touched.begin(), other.touched.end());
    s.controls.insert(other.controls.begin(), other.controls.end());
    for (std::size_t t : s.touched) s.controls.erase(t);
    return s;
  }

  std::set<std::size_t> all() const {
    std::set<std::size_t> out = touched;
    out.insert(controls.begin(), controls.end());
    return out;
  }
};

struct LocalTerm {
  std::size_t site = 0;
  int order = 1;
  DenseOperator op;
  Support support;
};

struct HamiltonianBundle {
  int order = 1;
  std::vector<LocalTerm> local_terms;  // sorted by (site, order)
  DenseOperator H_truncated;
  DenseOperator H_exact;
  std::vector<int> branch_offsets;

  const LocalTerm* term(std::size_t site, int order_j) const {
    for (const auto& t : local_terms)
      if (t.site == site && t.order == order_j) return &t;
    return nullptr;
  }

  // Sum of all orders at one site.
  DenseOperator density(std::size_t site) const {
    const auto dim = H_truncated.rows();
    DenseOperator h = DenseOperator::Zero(dim, dim);
    for (const auto& t : local_terms)
      if (t.site == site) h += t.op;
    return h;
  }
};

// Per-site Hamiltonian density up to `order`, from U = e^{-ia} e^{-ib} = e^{-2iH}
// with P = -ia, Q = -ib, R = -2iH substituted into the BCH series:
//   order 1: a(x)/2 or b(x)/2
//   order 2: -(i/4) sum_y [a(x), b(y)]                       (even x)
//   order 3: -(1/24) sum_{y1,y2} [c(x), [a(y1), b(y2)]],  c = a on even, -b on odd
//   order 4: (i/48) sum_{y1,y2,y3} [[a(x), [a(y1), b(y2)]], b(y3)]   (even x)
// Each multi-site commutator belongs to the site of its leftmost generator.
// Sums skip index combinations whose supports guarantee a vanishing commutator.
inline std::vector<LocalTerm> hamiltonian_density(const OntologicalBasis& basis, const Generators& gens, int order) {
  check_order(order);
  using Sparse = Eigen::SparseMatrix<Complex>;
  const Geometry& geo = basis.geometry();
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  const std::size_t sites = geo.cell_count();
  const Complex i_unit(0.0, 1.0);

  // Generators hold at most N entries per column; the nested commutators stay
  // sparse as well.
  std::vector<Sparse> gen;
  std::vector<Support> gen_support;
  for (std::size_t s = 0; s < sites; ++s) {
    gen.push_back(gens.local[s].sparseView());
    gen_support.push_back(Support::of_generator(geo, s));
  }

  // Nonvanishing [a(y1), b(y2)] pairs.
  struct Pair {
    std::size_t even, odd;
    Sparse op;
    Support support;
  };
  std::vector<Pair> ab;
  if (order >= 2) {
    for (std::size_t y1 : geo.even_sites())
      for (std::size_t y2 : geo.odd_sites())
        if (gen_support[y1].may_not_commute(gen_support[y2]))
          ab.push_back({y1, y2, commutator(gen[y1], gen[y2]), gen_support[y1].joined(gen_support[y2])});
  }

  std::vector<LocalTerm> terms;
  for (std::size_t x = 0; x < sites; ++x) {
    const bool even = geo.is_even(x);
    terms.push_back({x, 1, gens.local[x] / 2.0, gen_support[x]});

    if (order >= 2 && even) {
      Sparse acc(dim, dim);
      Support support = gen_support[x];
      for (const auto& p : ab) {
        if (p.even != x) continue;
        acc += p.op;
        support = support.joined(p.support);
      }
      terms.push_back({x, 2, DenseOperator(acc) * (-i_unit / 4.0), support});
    }

    if (order >= 3) {
      const Sparse c = even ? gen[x] : Sparse(-gen[x]);
      Sparse acc(dim, dim);
      Support support = gen_support[x];
      for (const auto& p : ab) {
        if (!gen_support[x].may_not_commute(p.support)) continue;
        acc += commutator(c, p.op);
        support = support.joined(p.support);
      }
      terms.push_back({x, 3, DenseOperator(acc) * (-1.0 / 24.0), support});
    }

    if (order >= 4 && even) {
      Sparse acc(dim, dim);
      Support support = gen_support[x];
      for (const auto& p : ab) {
        if (!gen_support[x].may_not_commute(p.support)) continue;
        const Sparse inner = commutator(gen[x], p.op);
        const Support inner_support = gen_support[x].joined(p.support);
        for (std::size_t y3 : geo.odd_sites()) {
          if (!inner_support.may_not_commute(gen_support[y3])) continue;
          acc += commutator(inner, gen[y3]);
          support = support.joined(inner_support.joined(gen_support[y3]));
        }
      }
      terms.push_back({x, 4, DenseOperator(acc) * (i_unit / 48.0), support});
    }
  }
  for (auto& t : terms) t.op = (t.op + t.op.adjoint()) / 2.0;
  std::stable_sort(terms.begin(), terms.end(),
                   [](const LocalTerm& l, const LocalTerm& r) { return std::tie(l.site, l.order) < std::tie(r.site, r.order); });
  return terms;
}

// H from the global BCH truncation: R_k(-ia, -ib) = -2iH.
inline DenseOperator global_truncated_hamiltonian(const Generators& gens, int order) {
  const Complex minus_i(0.0, -1.0);
  const DenseOperator r = bch_truncation(DenseOperator(minus_i * gens.a_total), DenseOperator(minus_i * gens.b_total), order);
  return r * Complex(0.0, 0.5);
}

struct ExactHamiltonian {
  DenseOperator H;
  Eigen::VectorXd energies;  // eigenvalues in the order offsets were applied (ascending principal phase)
  DenseOperator vectors;
  std::vector<int> branch_offsets;
};

// Hermitian H with e^{-2iH} = U. An eigenvalue e^{i theta} of U becomes the
// energy phi/2 with phi = (-theta mod 2 pi) in [0, 2 pi), shifted by
// pi * offset_j. Eigenpairs are ordered by ascending principal phi before the
// offsets are applied; an empty offset list means all zeros.
inline ExactHamiltonian exact_hamiltonian(const DenseOperator& u, std::span<const int> branch_offsets = {}) {
  require_square(u, "evolution operator");
  const auto tol = ToleranceContext::for_dim(static_cast<std::size_t>(u.rows()));
  if (!is_unitary(u, tol.abs_tol)) throw Error(ErrorCode::non_unitary, "evolution operator is not unitary");
  const auto n = u.rows();
  if (!branch_offsets.empty() && branch_offsets.size() != static_cast<std::size_t>(n))
    throw Error(ErrorCode::dimension_mismatch, "need one branch offset per eigenvalue (" + std::to_string(n) + ")");

  const NormalEigen eig = normal_eigen(u, tol.abs_tol);
  std::vector<double> phi(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    double p = std::fmod(-std::arg(eig.values[k]), kTwoPi);
    if (p < 0) p += kTwoPi;
    if (p > kTwoPi - tol.abs_tol || p < tol.abs_tol) p = 0.0;
    phi[static_cast<std::size_t>(k)] = p;
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    return phi[static_cast<std::size_t>(l)] < phi[static_cast<std::size_t>(r)];
  });

  ExactHamiltonian out;
  out.energies.resize(n);
  out.vectors.resize(n, n);
  out.branch_offsets.assign(branch_offsets.begin(), branch_offsets.end());
  if (out.branch_offsets.empty()) out.branch_offsets.assign(static_cast<std::size_t>(n), 0);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index k = order[static_cast<std::size_t>(j)];
    out.energies[j] = phi[static_cast<std::size_t>(k)] / 2.0 + std::numbers::pi * out.branch_offsets[static_cast<std::size_t>(j)];
    out.vectors.col(j) = eig.vectors.col(k);
  }
  out.H = out.vectors * out.energies.cast<Complex>().asDiagonal() * out.vectors.adjoint();
  out.H = (out.H + out.H.adjoint()) / 2.0;
  return out;
}

inline HamiltonianBundle build_hamiltonian(const OntologicalBasis& basis, const Automaton& automaton, int order,
                                           std::span<const int> branch_offsets = {},
                                           std::span<const int> shift_offsets = {}) {
  const Generators gens = build_generators(basis, automaton, shift_offsets);
  const Evolution evo = build_evolution(basis, automaton);
  HamiltonianBundle bundle;
  bundle.order = order;
  bundle.local_terms = hamiltonian_density(basis, gens, order);
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  bundle.H_truncated = DenseOperator::Zero(dim, dim);
  for (const auto& t : bundle.local_terms) bundle.H_truncated += t.op;
  auto exact = exact_hamiltonian(evo.U, branch_offsets);
  bundle.H_exact = std::move(exact.H);
  bundle.branch_offsets = std::move(exact.branch_offsets);
  return bundle;
}

}  // namespace revca
