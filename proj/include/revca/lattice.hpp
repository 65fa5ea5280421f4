#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "revca/error.hpp"

namespace revca {

using Coord = std::vector<int>;

// Periodic D-dimensional box with a value modulus N. Every extent must be even
// so the even/odd checkerboard survives the wrap.
struct LatticeSpec {
  std::vector<int> extents;
  int modulus = 2;

  std::size_t dims() const { return extents.size(); }

  std::size_t cell_count() const {
    return std::accumulate(extents.begin(), extents.end(), std::size_t{1},
                           [](std::size_t acc, int e) { return acc * static_cast<std::size_t>(e); });
  }

  void validate() const {
    if (extents.empty()) throw Error(ErrorCode::invalid_lattice, "lattice needs at least one dimension");
    for (int e : extents) {
      if (e <= 0 || e % 2 != 0)
        throw Error(ErrorCode::invalid_lattice,
                    "lattice extent " + std::to_string(e) + " must be a positive even integer");
    }
    if (modulus < 2)
      throw Error(ErrorCode::invalid_modulus, "modulus must be >= 2, got " + std::to_string(modulus));
  }

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

// Precomputed site tables for one LatticeSpec.
//
// Linear site index: axis 0 varies fastest (x0 + L0*x1 + L0*L1*x2 ...).
// Sites with even coordinate sum form the X sublattice, odd sums the Y
// sublattice; each sublattice is stored in ascending linear-index order and a
// site's "slot" is its position within its sublattice.
class Geometry {
 public:
  explicit Geometry(LatticeSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const std::size_t n = spec_.cell_count();
    const std::size_t d = spec_.dims();
    parity_.resize(n);
    slot_.resize(n);
    for (std::size_t site = 0; site < n; ++site) {
      Coord c = coord_of(site);
      int sum = std::accumulate(c.begin(), c.end(), 0);
      parity_[site] = static_cast<std::uint8_t>(sum % 2);
      auto& list = parity_[site] == 0 ? even_ : odd_;
      slot_[site] = list.size();
      list.push_back(site);
    }
    neighbors_.resize(n * 2 * d);
    for (std::size_t site = 0; site < n; ++site) {
      Coord c = coord_of(site);
      for (std::size_t axis = 0; axis < d; ++axis) {
        const int ext = spec_.extents[axis];
        Coord m = c, p = c;
        m[axis] = (c[axis] - 1 + ext) % ext;
        p[axis] = (c[axis] + 1) % ext;
        neighbors_[site * 2 * d + 2 * axis] = index_of_unchecked(m);
        neighbors_[site * 2 * d + 2 * axis + 1] = index_of_unchecked(p);
      }
    }
  }

  const LatticeSpec& spec() const { return spec_; }
  std::size_t cell_count() const { return parity_.size(); }
  std::size_t sublattice_size() const { return even_.size(); }
  std::size_t arity() const { return 2 * spec_.dims(); }

  bool is_even(std::size_t site) const { return parity_[site] == 0; }
  std::size_t slot(std::size_t site) const { return slot_[site]; }
  const std::vector<std::size_t>& even_sites() const { return even_; }
  const std::vector<std::size_t>& odd_sites() const { return odd_; }

  // Neighbors in the fixed argument order of Q:
  // (axis 0 minus, axis 0 plus, axis 1 minus, axis 1 plus, ...).
  std::span<const std::size_t> neighbors(std::size_t site) const {
    return {neighbors_.data() + site * arity(), arity()};
  }

  Coord coord_of(std::size_t site) const {
    Coord c(spec_.dims());
    for (std::size_t axis = 0; axis < spec_.dims(); ++axis) {
      c[axis] = static_cast<int>(site % static_cast<std::size_t>(spec_.extents[axis]));
      site /= static_cast<std::size_t>(spec_.extents[axis]);
    }
    return c;
  }

  std::size_t index_of(const Coord& c) const {
    if (c.size() != spec_.dims())
      throw Error(ErrorCode::invalid_site, "coordinate has " + std::to_string(c.size()) +
                                               " components, lattice has " +
                                               std::to_string(spec_.dims()));
    for (std::size_t axis = 0; axis < c.size(); ++axis) {
      if (c[axis] < 0 || c[axis] >= spec_.extents[axis])
        throw Error(ErrorCode::invalid_site, "coordinate component " + std::to_string(c[axis]) +
                                                 " out of range on axis " + std::to_string(axis));
    }
    return index_of_unchecked(c);
  }

  // Minimal-image signed displacement from `from` to `to`, each component in
  // (-L/2, L/2].
  Coord displacement(std::size_t from, std::size_t to) const {
    Coord a = coord_of(from), b = coord_of(to);
    Coord d(spec_.dims());
    for (std::size_t axis = 0; axis < d.size(); ++axis) {
      const int ext = spec_.extents[axis];
      int delta = ((b[axis] - a[axis]) % ext + ext) % ext;
      if (delta > ext / 2) delta -= ext;
      d[axis] = delta;
    }
    return d;
  }

  // Periodic L1 distance.
  int distance(std::size_t a, std::size_t b) const {
    int total = 0;
    for (int c : displacement(a, b)) total += std::abs(c);
    return total;
  }

 private:
  std::size_t index_of_unchecked(const Coord& c) const {
    std::size_t idx = 0;
    for (std::size_t axis = c.size(); axis-- > 0;)
      idx = idx * static_cast<std::size_t>(spec_.extents[axis]) + static_cast<std::size_t>(c[axis]);
    return idx;
  }

  LatticeSpec spec_;
  std::vector<std::uint8_t> parity_;
  std::vector<std::size_t> slot_;
  std::vector<std::size_t> even_;
  std::vector<std::size_t> odd_;
  std::vector<std::size_t> neighbors_;
};

}  // namespace revca
