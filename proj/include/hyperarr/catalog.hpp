#pragma once

#include <map>
#include <string>
#include <vector>

#include "hyperarr/arrangement.hpp"
#include "hyperarr/certificate.hpp"

namespace hyperarr::catalog {

// Coordinate hyperplanes of Q^l (field of order 1).
Arrangement boolean(std::size_t l);
// Q = x_1...x_k prod_{i<j, 0<=n<r} (x_i - zeta^n x_j) over Q(zeta_r).
Arrangement monomial(int r, int l, int k);
// ker(x_i) for i in 0..l-1 over Q(zeta_r): the additions turning monomial(r,l,k) into monomial(r,l,l).
std::vector<Hyperplane> coordinate_hyperplanes(int r, int l);

// omega = -(1 + sqrt(-7))/2 inside Q(zeta_7), with sqrt(-7) the quadratic Gauss sum.
Element omega7();
Arrangement g24();
std::vector<Hyperplane> g24_resolution();
// g24 with the twelve resolution hyperplanes appended.
Arrangement g24_resolved();

// 24 + 16 + 4 + 16 hyperplanes over Q(i); the first 40 form g29.
Arrangement g31();
Arrangement g29();

struct RestrictionCase {
  Arrangement arrangement;
  std::vector<int> deletions;  // 0-based indices, in deletion order
  std::vector<Hyperplane> additions;
};
// 28 hyperplanes over Q(zeta_3) with the deletion and addition data of its filtration.
RestrictionCase g33_a1();

// Lines of the 756 minimal vectors of the K12 lattice over the Eisenstein integers (126 hyperplanes).
Arrangement g34_model();

struct GateReport {
  bool passed = false;
  std::string source;
  std::vector<std::string> checks;  // one line per gate
  std::string failure;
};
// Reads <data>/g34.arr, locates a rank-5 flat with 45 hyperplanes and checks the G33 facts on it.
// Throws ValidationError with the report text when a gate fails.
Arrangement g34(GateReport* report = nullptr);
Arrangement g33(GateReport* report = nullptr);
// The localization at a point lying on exactly 45 hyperplanes, essentialized to rank 5.
Arrangement g33_from_g34(const Arrangement& g34, std::string* failure = nullptr);

std::string data_dir();

struct Entry {
  std::string name;
  std::string description;
};
std::vector<Entry> entries();
// Builds and validates a named entry; throws InvalidArgument for unknown names and
// ValidationError when an expected fact fails. Results are cached per process.
Arrangement build(const std::string& name);
// Named hyperplane lists usable as addition pools.
std::vector<Hyperplane> pool(const std::string& name);
std::vector<std::string> pool_names();

// Quoted freeness facts: A(G24), A(G31) and its 60 restrictions, and A(G33) when the
// data gate passes. Minimal-FFSA exponents of the G34 restrictions go in as notes.
void seed_facts(FactRegistry& facts, bool gated = true);
// A process-wide registry filled by seed_facts on first use.
FactRegistry& seeded_facts();

}  // namespace hyperarr::catalog
