#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "hyperarr/arrangement.hpp"
#include "hyperarr/catalog.hpp"
#include "hyperarr/errors.hpp"
#include "hyperarr/matrix.hpp"

using namespace hyperarr;

namespace {

Hyperplane hp(CyclotomicField f, std::vector<std::string> coords) { return Hyperplane::parse(f, coords); }

// Random arrangement with covector entries drawn from {0, +-1, +-2, +-z}.
Arrangement random_arrangement(std::mt19937_64& rng, int order, std::size_t dim, std::size_t n) {
  const CyclotomicField f = CyclotomicField::make(order);
  const std::vector<std::string> pool = order == 1 ? std::vector<std::string>{"0", "1", "-1", "2", "-2", "3"}
                                                   : std::vector<std::string>{"0", "1", "-1", "2", "z", "-z", "z+1"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<Hyperplane> hs;
  std::set<std::string> seen;
  for (int tries = 0; hs.size() < n && tries < 1000; ++tries) {
    std::vector<std::string> c(dim);
    for (auto& x : c) x = pool[pick(rng)];
    if (std::all_of(c.begin(), c.end(), [](const std::string& s) { return s == "0"; })) continue;
    Hyperplane h = hp(f, c);
    if (seen.insert(h.key()).second) hs.push_back(std::move(h));
  }
  return Arrangement(f, dim, std::move(hs));
}

std::size_t rank_oracle(const Arrangement& a, const std::vector<std::size_t>& idx) {
  std::vector<Vec> rows;
  for (auto i : idx) rows.push_back(a[i].covector());
  return rank_of_rows(a.field(), a.dim(), rows);
}

// Number of distinct traces H n K, counted by pairwise rank tests.
std::size_t restriction_size_oracle(const Arrangement& a, std::size_t h) {
  std::vector<std::size_t> reps;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k == h || rank_oracle(a, {h, k}) < 2) continue;
    bool fresh = true;
    for (auto r : reps) fresh = fresh && rank_oracle(a, {h, k, r}) == 3;
    if (fresh) reps.push_back(k);
  }
  return reps.size();
}

// Reducible iff some proper split S | T has rank S + rank T = rank A.
bool irreducible_oracle(const Arrangement& a) {
  const std::size_t n = a.size();
  if (n <= 1) return n == 1;
  std::vector<std::size_t> everything(n);
  for (std::size_t i = 0; i < n; ++i) everything[i] = i;
  const std::size_t r = rank_oracle(a, everything);
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); mask += 2) {
    std::vector<std::size_t> s, t;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? s : t).push_back(i);
    if (rank_oracle(a, s) + rank_oracle(a, t) == r) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("deletion and addition") {
  const Arrangement b3 = catalog::boolean(3);
  const CyclotomicField q = b3.field();
  CHECK(b3.without(hp(q, {"1", "0", "0"})).size() == 2);
  const Arrangement one(q, 2, {hp(q, {"1", "0"})});
  CHECK(one.without(one[0]).empty());
  CHECK(Arrangement(q, 2).with(hp(q, {"1", "0"})).size() == 1);
  CHECK_THROWS_AS(b3.with(hp(q, {"2", "0", "0"})), InvalidArgument);
  CHECK_THROWS_AS(b3.without(hp(q, {"1", "1", "0"})), InvalidArgument);

  const Arrangement g31 = catalog::build("g31");
  const CyclotomicField qi = g31.field();
  CHECK(g31.without(hp(qi, {"1", "0", "0", "0"})).size() == 59);

  const Arrangement g24 = catalog::build("g24");
  CHECK(g24.with(catalog::g24_resolution().front()).size() == 22);

  const auto rc = catalog::g33_a1();
  Arrangement tilde = rc.arrangement;
  for (int d : rc.deletions) tilde = tilde.without(rc.arrangement[static_cast<std::size_t>(d)]);
  CHECK(tilde.with(rc.additions[0]).size() == 23);
}

TEST_CASE("hyperplane normalization and keys") {
  const CyclotomicField q = CyclotomicField::make(1);
  CHECK(hp(q, {"2", "0", "0", "0"}) == hp(q, {"1", "0", "0", "0"}));
  CHECK(hp(q, {"0", "-3", "6"}).key() == hp(q, {"0", "1", "-2"}).key());
  CHECK_THROWS_AS(hp(q, {"0", "0"}), InvalidArgument);

  const Arrangement g24 = catalog::build("g24");
  auto hs = g24.hyperplanes();
  std::reverse(hs.begin(), hs.end());
  CHECK(Arrangement(g24.field(), 3, hs).key() == g24.key());
  CHECK(arr_parse(arr_serialize(g24)).key() == g24.key());
}

TEST_CASE("restriction") {
  const Arrangement b3 = catalog::boolean(3);
  const Arrangement r = b3.restrict_to_index(0);
  CHECK(r.size() == 2);
  CHECK(r.dim() == 2);

  const Arrangement g31 = catalog::build("g31");
  for (std::size_t i = 0; i < g31.size(); i += 7) CHECK(g31.restrict_to_index(i).size() == 31);

  const Arrangement g422 = catalog::build("g422");
  for (std::size_t i = 0; i < g422.size(); ++i) {
    const Arrangement res = g422.restrict_to_index(i);
    CHECK(res.size() <= 5);
    CHECK(res.size() == restriction_size_oracle(g422, i));
  }
  CHECK_THROWS_AS(b3.restrict_to(Hyperplane::parse(b3.field(), {"1", "1", "1"})), InvalidArgument);
}

TEST_CASE("product, rank and irreducibility") {
  const CyclotomicField q = CyclotomicField::make(1);
  const Arrangement phi1(q, 1);
  const Arrangement p = product(phi1, phi1);
  CHECK(p.dim() == 2);
  CHECK(p.empty());
  CHECK(product(catalog::boolean(2), catalog::boolean(2)).key() == catalog::boolean(4).key());
  const Arrangement a1(catalog::build("g24").field(), 1, {hp(catalog::build("g24").field(), {"1"})});
  CHECK(product(a1, catalog::build("g24")).size() == 22);

  CHECK(Arrangement(q, 3).rank() == 0);
  CHECK(catalog::build("g31").rank() == 4);
  CHECK(Arrangement(q, 3, {hp(q, {"1", "2", "3"})}).rank() == 1);

  CHECK_FALSE(catalog::boolean(3).is_irreducible());
  CHECK(catalog::boolean(3).components().size() == 3);
  CHECK(catalog::build("g31").is_irreducible());
  CHECK(Arrangement(q, 2, {hp(q, {"1", "0"}), hp(q, {"0", "1"}), hp(q, {"1", "-1"})}).is_irreducible());
}

TEST_CASE("arr format errors") {
  CHECK_THROWS_AS(arr_parse("dim 2\nh 1 0\n"), ParseError);
  CHECK_THROWS_AS(arr_parse("field cyclotomic 1\ndim 2\nh 1\n"), ParseError);
  CHECK_THROWS_AS(arr_parse("field cyclotomic 1\ndim 2\nh 1 0\nh 2 0\n"), ParseError);
  CHECK_THROWS_AS(arr_parse("field cyclotomic 1\ndim 2\nh 0 0\n"), ParseError);
  CHECK_THROWS_AS(arr_parse("field cyclotomic 4\ndim 2\nh 1 q\n"), ParseError);
  const Arrangement a = arr_parse("# comment\nfield cyclotomic 4\ndim 2\nh 1 z  # trailing\nh 1 -z\n");
  CHECK(a.size() == 2);
  CHECK(a.field().order() == 4);
}

TEST_CASE("property: core invariants on random arrangements") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int order = trial % 3 == 0 ? 1 : (trial % 3 == 1 ? 3 : 4);
    const std::size_t dim = 2 + static_cast<std::size_t>(trial % 3);
    const Arrangement a = random_arrangement(rng, order, dim, 3 + static_cast<std::size_t>(trial % 6));
    CAPTURE(arr_serialize(a));

    // Round trips and order independence.
    CHECK(arr_parse(arr_serialize(a)).key() == a.key());
    auto hs = a.hyperplanes();
    std::shuffle(hs.begin(), hs.end(), rng);
    const Arrangement perm(a.field(), a.dim(), hs);
    CHECK(perm.key() == a.key());

    std::vector<std::size_t> idx(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) idx[i] = i;
    CHECK(a.rank() == rank_oracle(a, idx));
    CHECK(a.is_irreducible() == irreducible_oracle(a));

    for (std::size_t i = 0; i < a.size(); ++i) {
      const Hyperplane& h = a[i];
      CHECK(a.without(h).with(h).key() == a.key());
      const Arrangement res = a.restrict_to(h);
      CHECK(res.size() <= a.size() - 1);
      CHECK(res.size() == restriction_size_oracle(a, i));
      CHECK(perm.restrict_to(h).key() == res.key());
    }

    const Arrangement b = random_arrangement(rng, order, 2, 3);
    const Arrangement c = random_arrangement(rng, order, 2, 2);
    CHECK(product(product(a, b), c).key() == product(a, product(b, c)).key());
    CHECK(product(a, b).rank() == a.rank() + b.rank());
  }
}
