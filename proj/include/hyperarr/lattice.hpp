#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperarr/arrangement.hpp"
#include "hyperarr/index_set.hpp"
#include "hyperarr/polynomial.hpp"

namespace hyperarr {

inline constexpr std::size_t kDefaultFlatBudget = 2'000'000;

struct Flat {
  IndexSet members;  // atoms (hyperplanes) containing the flat
  int rank = 0;
  std::vector<int> lower;  // lower covers
  std::vector<int> upper;  // upper covers
};

// A geometric lattice given by its flats as atom sets. Built either from an
// arrangement (then each flat also carries a basis of its subspace) or as an
// interval [X, top] of another lattice.
class Lattice {
 public:
  // Throws BudgetExceeded when more than `budget` flats would be created.
  static Lattice build(const Arrangement& a, std::optional<int> max_rank = std::nullopt,
                       std::size_t budget = kDefaultFlatBudget);

  std::size_t ambient_dim() const noexcept { return dim_; }
  std::size_t atoms() const noexcept { return n_atoms_; }
  int rank() const noexcept { return static_cast<int>(by_rank_.size()) - 1; }
  bool complete() const noexcept { return complete_; }
  std::size_t size() const noexcept { return flats_.size(); }
  const Flat& flat(std::size_t i) const { return flats_[i]; }
  const std::vector<int>& layer(int r) const;
  std::optional<int> find(const IndexSet& members) const;
  int atom_flat(int atom) const { return atom_flat_[static_cast<std::size_t>(atom)]; }
  int bottom() const noexcept { return 0; }
  // The unique flat of maximal rank; requires a complete lattice.
  int top() const;

  bool has_points() const noexcept { return !points_.empty(); }
  // Basis of the subspace X, as points of V.
  const std::vector<Vec>& points(std::size_t i) const { return points_[i]; }

  // All flats strictly below flat i except the bottom, any order.
  const std::vector<int>& down(std::size_t i) const;
  bool leq(int x, int y) const { return flats_[x].members.subset_of(flats_[y].members); }

  const std::vector<std::int64_t>& mobius() const;
  Poly charpoly() const;
  // Multiset {{|A_X| : rank X = 2}} as value -> multiplicity.
  std::map<int, int> rank2_profile() const;

  // Smallest flat containing both.
  int closure_join(int x, int y) const;
  // X + Y is a flat iff rank X + rank Y = rank(X v Y) + rank(X ^ Y); returns the flat X ^ Y (members A_X ∩ A_Y).
  std::optional<int> flat_join(int x, int y) const;
  bool is_modular(int x) const;
  // Maximal chain bottom..top of modular flats, or nullopt.
  std::optional<std::vector<int>> supersolvable_chain(std::size_t node_budget = 1'000'000) const;

  // The interval [x, top] as a lattice whose atoms are the upper covers of x (in that order).
  Lattice interval(int x) const;

 private:
  Lattice() = default;
  int insert(IndexSet members, int rank);
  void link(int lower, int upper);

  std::size_t dim_ = 0;
  std::size_t n_atoms_ = 0;
  bool complete_ = false;
  std::vector<Flat> flats_;
  std::vector<std::vector<int>> by_rank_;
  std::unordered_map<IndexSet, int> index_;
  std::vector<int> atom_flat_;
  std::vector<std::vector<Vec>> points_;
  mutable std::vector<std::vector<int>> down_;
  mutable std::vector<std::int64_t> mobius_;
  mutable std::unordered_map<int, bool> modular_cache_;
};

// "2^360 3^320 6^30".
std::string profile_str(const std::map<int, int>& profile);

// A_X: the hyperplanes of `a` containing flat x of its lattice, same ambient space.
Arrangement localization(const Arrangement& a, const Lattice& l, int x);

}  // namespace hyperarr
