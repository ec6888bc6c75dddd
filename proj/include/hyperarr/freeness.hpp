#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperarr/certificate.hpp"
#include "hyperarr/pool.hpp"

namespace hyperarr {

enum class Membership { Member, NonMember, Unknown };
std::string to_string(Membership m);

struct SearchOptions {
  std::size_t node_budget = 1'000'000;  // IF / RF nodes, DF nodes
  std::size_t flat_budget = kDefaultFlatBudget;
  // IF nodes spent when free_search falls back to an inductive attempt.
  std::size_t fallback_if_budget = 20'000;
  std::size_t supersolvable_budget = 100'000;
};

// Membership verdict for one class. A Member carries a Free certificate and
// its exponents; a NonMember carries its reason; Unknown carries why the
// search stopped.
struct ClassResult {
  Membership membership = Membership::Unknown;
  Status freeness = Status::Unknown;  // what the search learned about freeness itself
  Exponents exponents;
  CertPtr cert;
  std::string reason;
  std::size_t nodes = 0;
};

// Memoized searches over subarrangements of pools. Memo tables are keyed by
// pool identity and index set, so one Searcher should be reused for all work
// on one master pool.
class Searcher {
 public:
  explicit Searcher(SearchOptions opts = {}, const FactRegistry* facts = nullptr) : opts_(opts), facts_(facts) {}

  ClassResult inductive(const Pool& p, const IndexSet& b);
  ClassResult divisional(const Pool& p, const IndexSet& b);
  // Additions only from p's atoms outside b, at most `depth` of them along any branch.
  ClassResult recursive(const Pool& p, const IndexSet& b, int depth);
  // Best effort freeness: base, registry, chi, product, division, bounded induction.
  ClassResult free(const Pool& p, const IndexSet& b);

  const SearchOptions& options() const noexcept { return opts_; }

 private:
  struct Outcome {
    Membership m = Membership::Unknown;
    Exponents exps;
    CertPtr cert;
    std::string reason;
  };
  using Memo = std::unordered_map<const Pool*, std::unordered_map<IndexSet, Outcome>>;

  Outcome if_rec(const Pool& p, const IndexSet& b);
  Outcome df_rec(const Pool& p, const IndexSet& b);
  Outcome rf_rec(const Pool& p, const IndexSet& b, int depth);
  Outcome free_rec(const Pool& p, const IndexSet& b);
  std::optional<Outcome> trivial(const Pool& p, const IndexSet& b, std::optional<Exponents>* roots);
  std::optional<Outcome> supersolvable(const Pool& p, const IndexSet& b);
  std::vector<int> deletion_order(const Pool& p, const IndexSet& b) const;
  ClassResult finish(Outcome o, std::size_t nodes_before, bool exhausted_means_nonmember);
  void tick();

  SearchOptions opts_;
  const FactRegistry* facts_;
  std::size_t nodes_ = 0;
  std::size_t node_cap_ = 0;
  Memo if_memo_, df_memo_, free_memo_;
  std::unordered_map<const Pool*, std::map<std::pair<IndexSet, int>, Outcome>> rf_memo_;
};

// Free certificate helpers shared by searches and reports.
CertPtr make_free_cert(std::string rule, Exponents exps, std::optional<Hyperplane> h = std::nullopt,
                       std::vector<CertPtr> children = {});
CertPtr make_nonfree_cert(std::string rule, std::string reason, std::optional<Hyperplane> h = std::nullopt,
                          std::vector<CertPtr> children = {}, std::int64_t value = 0, std::string direction = {});
CertPtr make_unknown_cert(std::string reason);

// Convenience wrappers on whole arrangements.
ClassResult inductively_free(const Arrangement& a, const FactRegistry* facts = nullptr, SearchOptions opts = {});
ClassResult divisionally_free(const Arrangement& a, const FactRegistry* facts = nullptr, SearchOptions opts = {});
ClassResult recursively_free_search(const Arrangement& a, const std::vector<Hyperplane>& pool, int depth,
                                    const FactRegistry* facts = nullptr, SearchOptions opts = {});
ClassResult certify_free(const Arrangement& a, const FactRegistry* facts = nullptr, SearchOptions opts = {});

// Given freeness facts for two of A, A \ H, A^H in the registry, records the
// third. Returns the certificate of the inferred fact, or nullptr when nothing
// follows (fewer than two known, or the exponent pattern does not fit).
// Throws InvalidArgument when H is not in A.
struct ADInference {
  std::string inferred;  // "A", "deletion", "restriction" or empty
  Fact fact;
};
ADInference check_addition_deletion(const Arrangement& a, const Hyperplane& h, FactRegistry& facts);

Exponents product_exponents(const Exponents& a, const Exponents& b);

// Free filtration A = A_0 > A_1 > ... removing `deletions` in order.
struct FiltrationStep {
  std::size_t index = 0;  // 1-based
  Hyperplane hyperplane;
  std::size_t size_before = 0;
  std::size_t restriction_size = 0;
  std::int64_t b = 0;  // |A_{i-1}| - |A_{i-1}^H|
  Exponents restriction_exponents{};
  Exponents exponents{};  // of A_i
  bool ok = false;
  std::string failure{};
};
struct FiltrationReport {
  bool ok = false;
  Exponents start_exponents;
  std::vector<FiltrationStep> steps;
  std::string failure;  // "step i: ..."
  CertPtr final_cert;
};
// `start` certifies A free; when null it is searched for (registry, division).
FiltrationReport verify_filtration(const Arrangement& a, const std::vector<Hyperplane>& deletions,
                                   const FactRegistry* facts = nullptr, CertPtr start = nullptr,
                                   SearchOptions opts = {});
// Same on a pool, reusing its memo tables.
FiltrationReport verify_filtration(Searcher& s, const Pool& p, const IndexSet& start_set, CertPtr start_cert,
                                   const std::vector<int>& deletions);

struct ResolutionRow {
  std::size_t index = 0;  // 1-based
  Hyperplane hyperplane;
  Exponents exponents{};              // of A_j
  Exponents restriction_exponents{};  // of A_j^{H_j}
  bool ok = false;
  std::string failure{};
};
struct ResolutionReport {
  bool ok = false;
  Exponents start_exponents;
  std::vector<ResolutionRow> rows;
  std::string failure;
  CertPtr final_cert;
  Arrangement final_arrangement{CyclotomicField::make(1), 0};
};
ResolutionReport verify_resolution(const Arrangement& a, const std::vector<Hyperplane>& additions,
                                   const FactRegistry* facts = nullptr, CertPtr start = nullptr,
                                   SearchOptions opts = {});

}  // namespace hyperarr
