#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hyperarr/arrangement.hpp"
#include "hyperarr/index_set.hpp"
#include "hyperarr/lattice.hpp"
#include "hyperarr/polynomial.hpp"

namespace hyperarr {

// The flats of a subarrangement B of a pool, as flags over the pool's flats.
struct SubLattice {
  IndexSet members;
  std::vector<char> is_flat;
  int rank = 0;
};

// A fixed arrangement together with its full lattice. Subarrangements are
// index sets over its hyperplanes (atoms); their lattices are read off the
// pool lattice: a pool flat X is a flat of B iff B ∩ A_X lies in no lower
// cover of X. Restrictions to an atom are pools over the interval above it,
// with atom hyperplanes written in the deterministic basis of restrict_to.
class Pool : public std::enable_shared_from_this<Pool> {
 public:
  static std::shared_ptr<Pool> make(const Arrangement& a, std::size_t flat_budget = kDefaultFlatBudget);

  const Lattice& lattice() const noexcept { return lattice_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  std::size_t dim() const noexcept { return lattice_.ambient_dim(); }
  CyclotomicField field() const noexcept { return field_; }
  const Hyperplane& atom(std::size_t i) const { return atoms_[i]; }
  const std::vector<Hyperplane>& atoms() const noexcept { return atoms_; }
  IndexSet all() const { return IndexSet::range(atoms_.size()); }
  std::optional<std::size_t> index_of(const Hyperplane& h) const;

  // Hyperplanes of B in atom order.
  Arrangement arrangement(const IndexSet& b) const;
  ArrKey key(const IndexSet& b) const;

  SubLattice sub(const IndexSet& b) const;
  Poly charpoly(const IndexSet& b) const;
  // chi of the restriction of B to its flat x.
  Poly charpoly_above(const SubLattice& s, int x) const;
  int rank(const IndexSet& b) const { return sub(b).rank; }
  // |B^H| for H = atom h in B.
  std::size_t restriction_size(const IndexSet& b, int h) const;

  // Pool of the interval above atom h, shared by every B containing h.
  std::shared_ptr<const Pool> child(int h) const;
  // Atoms of child(h) forming B^h.
  IndexSet restriction_atoms(const IndexSet& b, int h) const;
  // Pool flat (rank 2) represented by child atom i of child(h).
  int child_atom_flat(int h, int i) const;

  bool is_irreducible(const IndexSet& b) const;

 private:
  Pool() = default;
  CyclotomicField field_ = CyclotomicField::make(1);
  Lattice lattice_ = Lattice::build(Arrangement(CyclotomicField::make(1), 0));
  std::vector<Hyperplane> atoms_;
  std::unordered_map<std::string, std::size_t> atom_index_;

  mutable std::mutex mu_;
  mutable std::unordered_map<IndexSet, Poly> chi_cache_;
  mutable std::unordered_map<int, std::shared_ptr<const Pool>> children_;
};

}  // namespace hyperarr
