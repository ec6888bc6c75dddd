#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hyperarr/field.hpp"
#include "hyperarr/index_set.hpp"
#include "hyperarr/matrix.hpp"

namespace hyperarr {

// H = ker(alpha), with alpha scaled so its first nonzero coordinate is 1.
class Hyperplane {
 public:
  explicit Hyperplane(Vec covector);
  // Parses one scalar per coordinate.
  static Hyperplane parse(CyclotomicField f, const std::vector<std::string>& coords);

  const Vec& covector() const noexcept { return alpha_; }
  std::size_t dim() const noexcept { return alpha_.size(); }
  CyclotomicField field() const noexcept { return alpha_.front().field(); }
  // "(c1,c2,...)" in canonical scalar text.
  const std::string& key() const noexcept { return key_; }
  bool contains(const Vec& point) const { return dot(alpha_, point).is_zero(); }

  friend bool operator==(const Hyperplane& a, const Hyperplane& b) { return a.key_ == b.key_; }
  friend bool operator!=(const Hyperplane& a, const Hyperplane& b) { return a.key_ != b.key_; }

 private:
  Vec alpha_;
  std::string key_;
};

// Canonical text of an arrangement: dimension, field order and sorted covector keys.
struct ArrKey {
  std::string text;
  friend bool operator==(const ArrKey&, const ArrKey&) = default;
  friend bool operator<(const ArrKey& a, const ArrKey& b) { return a.text < b.text; }
};

// A central arrangement: an ordered list of distinct hyperplanes in a fixed dimension.
// Values are immutable; every operation returns a new arrangement.
class Arrangement {
 public:
  Arrangement(CyclotomicField f, std::size_t dim, std::vector<Hyperplane> hyperplanes = {}, std::string name = {});
  static Arrangement from_covectors(CyclotomicField f, std::size_t dim, const std::vector<Vec>& covectors,
                                    std::string name = {});

  CyclotomicField field() const noexcept { return field_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return hs_.size(); }
  bool empty() const noexcept { return hs_.empty(); }
  const Hyperplane& operator[](std::size_t i) const { return hs_[i]; }
  const std::vector<Hyperplane>& hyperplanes() const noexcept { return hs_; }
  const std::string& name() const noexcept { return name_; }
  Arrangement renamed(std::string name) const;

  std::optional<std::size_t> index_of(const Hyperplane& h) const;
  bool contains(const Hyperplane& h) const { return index_of(h).has_value(); }
  ArrKey key() const;
  // The same hyperplanes with every coordinate that vanishes on all of them removed.
  // A factor of a product embedded in the product's space maps back to itself.
  Arrangement drop_zero_coordinates() const;

  Arrangement without(const Hyperplane& h) const;
  Arrangement without_index(std::size_t i) const;
  Arrangement with(const Hyperplane& h) const;
  // Hyperplanes whose indices are in `members`, original order kept.
  Arrangement subarrangement(const IndexSet& members) const;
  Arrangement restrict_to(const Hyperplane& h) const;
  Arrangement restrict_to_index(std::size_t i) const;
  // Same hyperplanes written in coordinates of the span of the covectors.
  Arrangement essentialize() const;

  std::size_t rank() const;
  bool is_essential() const { return rank() == dim_; }
  // Index sets of the irreducible factors, ordered by smallest member.
  std::vector<IndexSet> components() const;
  bool is_irreducible() const;

  IndexSet all() const { return IndexSet::range(hs_.size()); }

 private:
  CyclotomicField field_;
  std::size_t dim_;
  std::vector<Hyperplane> hs_;
  std::string name_;
  std::unordered_map<std::string, std::size_t> index_;
};

Arrangement product(const Arrangement& a, const Arrangement& b);

// Deterministic basis of ker(alpha) used by restrict_to; rows are points of H.
std::vector<Vec> hyperplane_basis(const Hyperplane& h);

// .arr text format.
std::string arr_serialize(const Arrangement& a);
Arrangement arr_parse(std::string_view text, std::string name = {});
Arrangement arr_read_file(const std::string& path);
void arr_write_file(const Arrangement& a, const std::string& path);

}  // namespace hyperarr

template <>
struct std::hash<hyperarr::ArrKey> {
  std::size_t operator()(const hyperarr::ArrKey& k) const noexcept { return std::hash<std::string>{}(k.text); }
};
