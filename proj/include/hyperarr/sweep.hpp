#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperarr/certificate.hpp"
#include "hyperarr/pool.hpp"

namespace hyperarr {

// A hyperplane outside the arrangement together with the rank-2 flats it contains.
struct Candidate {
  Hyperplane hyperplane;
  std::vector<int> flats;  // rank-2 flats of the pool lattice inside the hyperplane
};

struct CandidateSet {
  std::vector<Candidate> candidates;  // sorted by covector key
  // False in dimension 2, where every line through the origin contains the only rank-2 flat.
  bool complete = true;
  std::string note;
};

// Every hyperplane not in the pool that contains at least two rank-2 flats.
// Two distinct rank-2 flats span a hyperplane exactly when they lie below a
// common rank-3 flat, so it is enough to pair the lower covers of each rank-3
// flat; pairs sharing a member only span that member. Needs a pool built from
// an arrangement (flats carry points).
CandidateSet enumerate_candidates(const Pool& p);
CandidateSet enumerate_candidates(const Arrangement& a);

struct Obstruction {
  std::int64_t sum = 0;  // sum over rank-2 flats X inside H of (|A_X| - 1)
  std::size_t flats = 0;
  bool passes = false;  // sum is an exponent, and not 1 when A is irreducible
};
Obstruction addition_obstruction(const Arrangement& a, const Exponents& exps, const Hyperplane& h);

struct SweepOptions {
  unsigned threads = 1;
  // Compute chi(A u H) for every external candidate, not only those past the obstruction.
  bool all_charpolys = false;
};

struct CandidateOutcome {
  Hyperplane hyperplane;
  bool internal = false;  // lies in the pool but not in the swept subarrangement
  std::size_t flats = 0;
  std::int64_t sum = 0;
  // "obstruction", "charpoly" (chi does not split), "exponents" (roots differ from the forced pattern) or "survivor"
  std::string stage{};
  std::optional<Poly> chi{};
};

struct SweepReport {
  std::size_t size = 0;
  Exponents exponents;
  bool irreducible = true;
  std::size_t external_candidates = 0;
  std::size_t internal_candidates = 0;
  std::map<std::int64_t, std::size_t> histogram;        // obstruction sums of external candidates
  std::map<std::string, std::size_t> stage_counts;      // external candidates by stage
  // External candidates whose chi was computed and splits, by chi.
  std::map<std::string, std::size_t> splitting_charpolys;
  std::size_t charpolys_computed = 0;
  std::int64_t max_single_flat = 0;
  std::int64_t min_admissible = 0;
  bool complete = false;
  std::string note;
  std::vector<CandidateOutcome> survivors;           // external
  std::vector<CandidateOutcome> internal_survivors;  // inside the pool: allowed re-additions
  // Classes of external candidates with a computed chi, keyed by flat sizes and chi.
  std::map<std::string, std::size_t> fingerprint_classes;
};

// Sweeps additions to the subarrangement b of p (free with exponents e).
// External candidates are those of `cands` (default: enumerated from p);
// internal candidates are the atoms of p outside b.
SweepReport no_free_addition(const Pool& p, const IndexSet& b, const Exponents& e, SweepOptions opts = {},
                             const CandidateSet* cands = nullptr);
SweepReport no_free_addition(const Arrangement& a, const Exponents& e, SweepOptions opts = {});

// True iff every rank-2 flat of the subarrangement N lies in a hyperplane of A \ N.
bool condition_star(const Pool& p, const IndexSet& n);
bool condition_star(const Arrangement& a, const std::vector<Hyperplane>& n);

}  // namespace hyperarr
