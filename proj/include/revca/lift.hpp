#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revca/automaton.hpp"
#include "revca/error.hpp"
#include "revca/lattice.hpp"
#include "revca/linalg.hpp"

namespace revca {

inline constexpr std::size_t kDefaultDimensionCap = 4096;

// Ontological basis of a finite lattice: one basis vector per configuration.
//
// Index encoding is mixed radix in base N. Digit j (weight N^j) holds the value
// of the j-th site in the list [even sites ascending, odd sites ascending], so
// the X sublattice occupies the low digits.
class OntologicalBasis {
 public:
  explicit OntologicalBasis(LatticeSpec spec, std::size_t cap = kDefaultDimensionCap) : geo_(std::move(spec)) {
    const std::size_t cells = geo_.cell_count();
    const auto n = static_cast<std::size_t>(geo_.spec().modulus);
    std::size_t dim = 1;
    bool overflow = false;
    for (std::size_t i = 0; i < cells; ++i) {
      if (dim > std::numeric_limits<std::size_t>::max() / n) {
        overflow = true;
        break;
      }
      dim *= n;
    }
    if (overflow || dim > cap) {
      const std::string required = overflow ? std::string("more than 2^64")
                                            : std::to_string(dim);
      throw Error(ErrorCode::dimension_cap_exceeded,
                  "Hilbert space dimension " + std::to_string(n) + "^" + std::to_string(cells) + " = " + required +
                      " exceeds the dimension cap " + std::to_string(cap) + "; requires cap >= " + required);
    }
    dim_ = dim;
    weight_.resize(cells);
    const std::size_t half = geo_.sublattice_size();
    std::size_t w = 1;
    std::vector<std::size_t> by_digit(cells);
    for (std::size_t j = 0; j < half; ++j) by_digit[j] = geo_.even_sites()[j];
    for (std::size_t j = 0; j < half; ++j) by_digit[half + j] = geo_.odd_sites()[j];
    for (std::size_t j = 0; j < cells; ++j) {
      weight_[by_digit[j]] = w;
      w *= n;
    }
  }

  std::size_t dim() const { return dim_; }
  const Geometry& geometry() const { return geo_; }
  const LatticeSpec& spec() const { return geo_.spec(); }
  int modulus() const { return geo_.spec().modulus; }

  int value(std::size_t index, std::size_t site) const {
    return static_cast<int>((index / weight_[site]) % static_cast<std::size_t>(modulus()));
  }

  std::size_t with_value(std::size_t index, std::size_t site, int v) const {
    const int old = value(index, site);
    return index - static_cast<std::size_t>(old) * weight_[site] + static_cast<std::size_t>(v) * weight_[site];
  }

  std::size_t encode(const AutomatonState& s) const {
    std::size_t idx = 0;
    const std::size_t half = geo_.sublattice_size();
    for (std::size_t j = 0; j < half; ++j) idx += static_cast<std::size_t>(s.x_values[j]) * weight_[geo_.even_sites()[j]];
    for (std::size_t j = 0; j < half; ++j) idx += static_cast<std::size_t>(s.y_values[j]) * weight_[geo_.odd_sites()[j]];
    return idx;
  }

  AutomatonState decode(std::size_t index) const {
    AutomatonState s = zero_state(geo_.spec());
    const std::size_t half = geo_.sublattice_size();
    for (std::size_t j = 0; j < half; ++j) s.x_values[j] = value(index, geo_.even_sites()[j]);
    for (std::size_t j = 0; j < half; ++j) s.y_values[j] = value(index, geo_.odd_sites()[j]);
    return s;
  }

  static constexpr std::string_view convention() {
    return "mixed-radix base N; digit j (weight N^j) is the value at the j-th site of "
           "[even sites ascending, odd sites ascending]; linear site index = x0 + L0*x1 + L0*L1*x2 + ...";
  }

 private:
  Geometry geo_;
  std::size_t dim_ = 0;
  std::vector<std::size_t> weight_;  // by linear site index
};

inline void require_matching(const OntologicalBasis& basis, const Automaton& automaton) {
  if (!(basis.spec() == automaton.spec()))
    throw Error(ErrorCode::invalid_config, "basis and automaton use different lattices");
}

// Value of Q at `site` for basis configuration `index`.
inline int rule_value(const OntologicalBasis& basis, const Automaton& automaton, std::size_t index,
                      std::size_t site) {
  const auto nbrs = basis.geometry().neighbors(site);
  std::vector<int> tuple(nbrs.size());
  for (std::size_t k = 0; k < nbrs.size(); ++k) tuple[k] = basis.value(index, nbrs[k]);
  return automaton.rule()(tuple);
}

// Basis permutation of a single-site update: image[i] is the configuration
// reached from configuration i when `site` gains Q(neighbors) mod N.
inline std::vector<std::size_t> site_update_permutation(const OntologicalBasis& basis, const Automaton& automaton,
                                                        std::size_t site) {
  require_matching(basis, automaton);
  const int n = basis.modulus();
  std::vector<std::size_t> image(basis.dim());
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const int q = rule_value(basis, automaton, i, site);
    image[i] = basis.with_value(i, site, (basis.value(i, site) + q) % n);
  }
  return image;
}

// Column i holds a 1 in row image[i].
inline DenseOperator permutation_matrix(std::span<const std::size_t> image) {
  const auto dim = static_cast<Eigen::Index>(image.size());
  DenseOperator m = DenseOperator::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) m(static_cast<Eigen::Index>(image[static_cast<std::size_t>(i)]), i) = 1.0;
  return m;
}

// A(x) for an even site, B(x) for an odd site.
inline DenseOperator build_site_update(const OntologicalBasis& basis, const Automaton& automaton,
                                       const Coord& site) {
  return permutation_matrix(site_update_permutation(basis, automaton, basis.geometry().index_of(site)));
}

struct Evolution {
  DenseOperator A;  // all even-site updates
  DenseOperator B;  // all odd-site updates
  DenseOperator U;  // A * B: one epoch
  std::vector<std::size_t> u_image;
};

inline Evolution build_evolution(const OntologicalBasis& basis, const Automaton& automaton) {
  const std::size_t dim = basis.dim();
  auto compose_all = [&](const std::vector<std::size_t>& sites) {
    std::vector<std::size_t> total(dim);
    for (std::size_t i = 0; i < dim; ++i) total[i] = i;
    for (std::size_t site : sites) {
      const auto step = site_update_permutation(basis, automaton, site);
      for (auto& t : total) t = step[t];
    }
    return total;
  };
  const auto a = compose_all(basis.geometry().even_sites());
  const auto b = compose_all(basis.geometry().odd_sites());
  std::vector<std::size_t> u(dim);
  for (std::size_t i = 0; i < dim; ++i) u[i] = a[b[i]];
  return {permutation_matrix(a), permutation_matrix(b), permutation_matrix(u), u};
}

// Hermitian generator P of the cyclic down-shift, e^{iP}|v> = |v - 1 mod N>,
// built from the discrete Fourier modes f_k(v) = w^{kv}/sqrt(N) with
// eigenphases 2*pi*(k/N + offset_k). Empty `offsets` selects the principal
// branch [0, 2*pi).
inline DenseOperator build_shift_generator(int modulus, std::span<const int> offsets = {}) {
  if (modulus < 2) throw Error(ErrorCode::invalid_modulus, "shift generator needs modulus >= 2");
  if (!offsets.empty() && offsets.size() != static_cast<std::size_t>(modulus))
    throw Error(ErrorCode::dimension_mismatch, "need one branch offset per Fourier mode");
  const Eigen::Index n = modulus;
  DenseOperator p = DenseOperator::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double theta = kTwoPi * (static_cast<double>(k) / n + (offsets.empty() ? 0 : offsets[static_cast<std::size_t>(k)]));
    Eigen::VectorXcd f(n);
    for (Eigen::Index v = 0; v < n; ++v) f[v] = std::polar(1.0 / std::sqrt(double(n)), kTwoPi * double((k * v) % n) / n);
    p += theta * f * f.adjoint();
  }
  return (p + p.adjoint()) / 2.0;
}

// Local generator a(x) (even site) or b(x) (odd site): P acting on the site's
// own value times the diagonal multiplier Q(neighbors). e^{-i a(x)} = A(x).
inline DenseOperator build_local_generator(const OntologicalBasis& basis, const Automaton& automaton,
                                           std::size_t site, const DenseOperator& shift_generator) {
  require_matching(basis, automaton);
  const int n = basis.modulus();
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  DenseOperator g = DenseOperator::Zero(dim, dim);
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const int q = rule_value(basis, automaton, i, site);
    if (q == 0) continue;
    const int v = basis.value(i, site);
    for (int w = 0; w < n; ++w)
      g(static_cast<Eigen::Index>(basis.with_value(i, site, w)), static_cast<Eigen::Index>(i)) =
          shift_generator(w, v) * static_cast<double>(q);
  }
  return g;
}

inline DenseOperator build_local_generator(const OntologicalBasis& basis, const Automaton& automaton,
                                           const Coord& site) {
  return build_local_generator(basis, automaton, basis.geometry().index_of(site),
                               build_shift_generator(basis.modulus()));
}

// Per-site generators: generators[site] is a(site) or b(site).
struct Generators {
  std::vector<DenseOperator> local;
  DenseOperator a_total;  // sum over even sites
  DenseOperator b_total;  // sum over odd sites
};

inline Generators build_generators(const OntologicalBasis& basis, const Automaton& automaton,
                                   std::span<const int> shift_offsets = {}) {
  const DenseOperator p = build_shift_generator(basis.modulus(), shift_offsets);
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  Generators out{{}, DenseOperator::Zero(dim, dim), DenseOperator::Zero(dim, dim)};
  const auto& geo = basis.geometry();
  for (std::size_t site = 0; site < geo.cell_count(); ++site) {
    out.local.push_back(build_local_generator(basis, automaton, site, p));
    (geo.is_even(site) ? out.a_total : out.b_total) += out.local.back();
  }
  return out;
}

enum class OperatorClass { beable, changeable, superimposable };

inline std::string_view to_string(OperatorClass c) {
  switch (c) {
    case OperatorClass::beable: return "beable";
    case OperatorClass::changeable: return "changeable";
    case OperatorClass::superimposable: return "superimposable";
  }
  return "unknown";
}

inline bool is_diagonal(const DenseOperator& op, const ToleranceContext& tol) {
  for (Eigen::Index j = 0; j < op.cols(); ++j)
    for (Eigen::Index i = 0; i < op.rows(); ++i)
      if (i != j && std::abs(op(i, j)) > tol.abs_tol) return false;
  return true;
}

// Exactly one non-vanishing entry in every row and every column.
inline bool has_permutation_structure(const DenseOperator& op, const ToleranceContext& tol) {
  std::vector<int> row_count(static_cast<std::size_t>(op.rows()), 0);
  for (Eigen::Index j = 0; j < op.cols(); ++j) {
    int col_count = 0;
    for (Eigen::Index i = 0; i < op.rows(); ++i) {
      if (std::abs(op(i, j)) > tol.abs_tol) {
        ++col_count;
        ++row_count[static_cast<std::size_t>(i)];
      }
    }
    if (col_count != 1) return false;
  }
  for (int c : row_count)
    if (c != 1) return false;
  return true;
}

// Most specific class wins: a diagonal operator is a beable even when it also
// has one entry per row and column (the identity, for instance).
inline OperatorClass classify(const DenseOperator& op, const ToleranceContext& tol) {
  require_square(op, "classified operator");
  if (is_diagonal(op, tol)) return OperatorClass::beable;
  if (has_permutation_structure(op, tol)) return OperatorClass::changeable;
  return OperatorClass::superimposable;
}

inline OperatorClass classify(const DenseOperator& op) {
  return classify(op, ToleranceContext::for_dim(static_cast<std::size_t>(op.rows())));
}

// B' = C B C^{-1}, so that B' C = C B. C may be any phase- or weight-carrying
// permutation (including invertible diagonal ones).
inline DenseOperator conjugate_beable(const DenseOperator& beable, const DenseOperator& changeable,
                                      const ToleranceContext& tol) {
  require_same_dim(beable, changeable);
  if (!is_diagonal(beable, tol))
    throw Error(ErrorCode::class_mismatch, "first argument is not a beable (not diagonal)");
  if (!has_permutation_structure(changeable, tol))
    throw Error(ErrorCode::class_mismatch, "second argument is not a changeable (not one entry per row and column)");
  const Eigen::Index dim = beable.rows();
  DenseOperator out = DenseOperator::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    Eigen::Index i = 0;
    changeable.col(j).cwiseAbs().maxCoeff(&i);
    // C e_j = c e_i, so C B C^{-1} e_i = B_jj e_i.
    out(i, i) = beable(j, j);
  }
  return out;
}

inline DenseOperator conjugate_beable(const DenseOperator& beable, const DenseOperator& changeable) {
  return conjugate_beable(beable, changeable, ToleranceContext::for_dim(static_cast<std::size_t>(beable.rows())));
}

// Diagonal beable measuring the value at `site`.
inline DenseOperator site_value_beable(const OntologicalBasis& basis, std::size_t site) {
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  DenseOperator b = DenseOperator::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) b(i, i) = basis.value(static_cast<std::size_t>(i), site);
  return b;
}

}  // namespace revca
