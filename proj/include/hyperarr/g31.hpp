#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyperarr/freeness.hpp"
#include "hyperarr/sweep.hpp"

namespace hyperarr::g31 {

// The 15 blocks of 4 hyperplanes, the six stars of 5 blocks and their unions M_i.
struct Partition {
  std::vector<IndexSet> blocks;
  std::vector<std::array<int, 5>> stars;  // block indices
  std::vector<IndexSet> m;                // M_i, 20 hyperplanes each
  std::vector<int> block_of;              // hyperplane -> block
  std::vector<std::array<int, 2>> label;  // block -> the two stars containing it
};

// Four hyperplanes pairwise lying in a common six-fold flat, spanning rank 4.
// Throws ValidationError("construction mismatch ...") unless they form 15 disjoint blocks covering A.
std::vector<IndexSet> compute_blocks(const Pool& a);
// Blocks are adjacent when a triple flat meets both; stars are the maximal 5-cliques.
// Throws ValidationError unless there are exactly six and every A \ M_i has 40 hyperplanes
// and chi = (t-1)(t-9)(t-13)(t-17).
Partition compute_stars(const Pool& a, std::vector<IndexSet> blocks);
Partition compute_partition(const Pool& a);

struct TrichotomyReport {
  std::size_t six = 0, triangle = 0, simple = 0;  // incidences (H, X) by case
  std::size_t violations = 0;
  std::vector<std::string> details;  // first violations, with data
  std::map<std::string, std::size_t> per_hyperplane;  // "six,triangle,simple" -> number of hyperplanes
};
TrichotomyReport trichotomy_check(const Pool& a, const Partition& part);

// The two-way characterization of free filtration subarrangements A \ N.
bool ffsa_predict(const Pool& a, const Partition& part, const IndexSet& n);

// N = union over H' in B \ {H} of A_{H n H'} \ {H'}: 13 hyperplanes.
IndexSet minimal_n(const Pool& a, const Partition& part, int block, int h);

enum class Search { Found, NotFound, Unknown };
std::string to_string(Search s);

// Looks for an order of removing N from the start set along which every step
// is certified by addition-deletion. Exhaustive over orders (memoized by the
// removed set) unless restriction freeness is undecided somewhere.
struct FiltrationSearch {
  Search result = Search::Unknown;
  std::vector<int> order;  // when found
  Exponents exponents;     // of A \ N, when found
  CertPtr cert;            // when found
  std::size_t states = 0;
};
FiltrationSearch find_filtration(Searcher& s, const Pool& a, const IndexSet& start, CertPtr start_cert,
                                 const IndexSet& n, std::size_t state_budget = 200'000);

// Certificate that A \ H is not free, given a free certificate for A and H in A.
// Returns an unknown certificate when none of the deletion rules applies.
CertPtr deletion_nonfree(Searcher& s, const Pool& p, const IndexSet& b, CertPtr b_cert, int h);

struct CrossValidateOptions {
  std::uint64_t seed = 0;
  std::size_t exhaustive_up_to = 2;  // every N with |N| <= this
  std::size_t random_per_size = 200;   // random N for each size exhaustive_up_to+1 .. max_random_size
  std::size_t max_random_size = 13;
  std::size_t m_orders = 1;          // random full-M_i removal orders per i
  std::size_t state_budget = 20'000;
};
struct CrossValidateReport {
  std::size_t samples = 0, agree = 0, mismatches = 0, undecided = 0;
  std::vector<std::string> mismatch_details;
  std::map<std::size_t, std::array<std::size_t, 3>> by_size;  // |N| -> (predicted free, found, agree)
  bool minimal_40 = false;  // every single deletion of every A \ M_i is certified non-free
  std::size_t minimal_checked = 0, minimal_nonfree = 0;
};
CrossValidateReport ffsa_cross_validate(Searcher& s, const Pool& a, const Partition& part, CertPtr a_cert,
                                        const CrossValidateOptions& opts);

struct SampleSweep {
  std::string label;
  std::size_t size = 0;
  Exponents exponents;
  bool certified = false;
  SweepReport sweep;
};
struct NoAdditionReport {
  std::vector<SampleSweep> samples;
  std::size_t external_survivors = 0;
  bool all_complete = true;
};
// Samples: A itself, the six A \ M_i, minimal (13-element N) cases and random
// intermediate filtration states, `count` in total, drawn with `seed`.
NoAdditionReport ffsa_no_addition_sweep(Searcher& s, const Pool& a, const Partition& part, CertPtr a_cert,
                                        std::size_t count, std::uint64_t seed, SweepOptions opts = {},
                                        const CandidateSet* cands = nullptr);

// Partition as a 6x6 grid: cell (i,j) holds the block shared by stars i and j.
std::string grid_text(const Partition& part);

}  // namespace hyperarr::g31
