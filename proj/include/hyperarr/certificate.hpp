#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperarr/arrangement.hpp"
#include "hyperarr/polynomial.hpp"

namespace hyperarr {

enum class Status { Free, NonFree, Unknown };
std::string to_string(Status s);

// Multiset of exponents, ascending. Attached to a Free verdict it has one entry per coordinate.
using Exponents = std::vector<std::int64_t>;
std::string exponents_str(const Exponents& e);  // "{{1,13,17,29}}"

// Roots of chi when it splits over Z with all roots in [0, n]; the roots are the exponents of a free arrangement.
std::optional<Exponents> exponents_from_charpoly(const Poly& chi, std::size_t n_hyperplanes);

// True when `sub` is a sub-multiset of `super`; `rest` then receives the difference.
bool multiset_contains(const Exponents& super, const Exponents& sub, Exponents* rest = nullptr);
// e with zeros appended up to `dim` entries, sorted.
Exponents pad_exponents(Exponents e, std::size_t dim);
// e with one copy of `from` replaced by `to`, re-sorted; nullopt when `from` is absent.
std::optional<Exponents> exponents_replace(const Exponents& e, std::int64_t from, std::int64_t to);

struct Certificate;
using CertPtr = std::shared_ptr<const Certificate>;

// A proof tree. Each node is about one arrangement; children are about
// arrangements derived from it as the rule prescribes:
//   base                          rank <= 2, no children
//   catalog_fact                  registry entry `key`, no children
//   product                       one child per irreducible component (same ambient space)
//   addition       H in A         [A \ H, A^H]
//   deletion       H not in A     [A u H, (A u H)^H]
//   division       H in A         [A^H]
//   supersolvable                 `chain` of modular flats as hyperplane sets
//   nonfree_charpoly              chi does not split
//   nonfree_restriction_size      H not in A; [A u H] free and |A u H| - |(A u H)^H| is not an exponent
//   nonfree_addition_obstruction  H in A; [A \ H] free and the obstruction sum fails
//   nonfree_exponent_mismatch     [A \ H] or [A u H] free; chi(A) differs from the forced exponents
//   nonfree_restriction           [A \ H] or [A u H] free, [restriction] not free
//   unknown                       `reason` says why
// `direction` is "addition" when H is in A and "deletion" otherwise.
struct Certificate {
  std::string rule;
  Status status = Status::Unknown;
  Exponents exponents;
  std::optional<Hyperplane> hyperplane;
  std::string direction;
  std::string key;
  std::string source;
  std::string reason;
  std::string heuristic;
  std::int64_t value = 0;
  std::vector<CertPtr> children;
  std::vector<std::vector<Hyperplane>> chain;
};

nlohmann::json cert_to_json(const Certificate& c);
// Throws ParseError on malformed input; scalars are parsed in `f`.
CertPtr cert_from_json(const nlohmann::json& j, CyclotomicField f);

// Number of nodes and the set of rules used, for summaries.
std::size_t cert_size(const Certificate& c);
std::map<std::string, std::size_t> cert_rules(const Certificate& c);

struct Fact {
  Status status = Status::Unknown;
  Exponents exponents;
  std::string source;
};

// ArrKey -> fact. Grows only; inserting a fact that contradicts a stored one throws ValidationError.
class FactRegistry {
 public:
  // Returns false when an identical fact is already present.
  bool insert(const ArrKey& key, Fact fact);
  std::optional<Fact> lookup(const ArrKey& key) const;
  std::size_t size() const;
  // Quoted exponent data that has no arrangement attached.
  void note(const std::string& label, std::vector<Exponents> values);
  std::map<std::string, std::vector<Exponents>> notes() const;

 private:
  mutable std::mutex mu_;
  std::map<ArrKey, Fact> facts_;
  std::map<std::string, std::vector<Exponents>> notes_;
};

struct VerifyResult {
  bool ok = true;
  std::string failure;  // first failing node, as a path of rule names
};

// Replays every rule from scratch: restrictions, deletions and additions are
// rebuilt with the arrangement operations and characteristic polynomials are
// recomputed from freshly built lattices.
VerifyResult cert_verify(const Arrangement& a, const Certificate& c, const FactRegistry* facts = nullptr);

}  // namespace hyperarr
