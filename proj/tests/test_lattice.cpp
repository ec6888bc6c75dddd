#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "hyperarr/arrangement.hpp"
#include "hyperarr/catalog.hpp"
#include "hyperarr/errors.hpp"
#include "hyperarr/lattice.hpp"
#include "hyperarr/matrix.hpp"

using namespace hyperarr;

namespace {

Hyperplane hp(CyclotomicField f, std::vector<std::string> coords) { return Hyperplane::parse(f, coords); }

Arrangement random_arrangement(std::mt19937_64& rng, int order, std::size_t dim, std::size_t n) {
  const CyclotomicField f = CyclotomicField::make(order);
  const std::vector<std::string> pool = order == 1 ? std::vector<std::string>{"0", "1", "-1", "2", "-2"}
                                                   : std::vector<std::string>{"0", "1", "-1", "z", "-z"};
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

// Flats by brute force: subsets closed under rank-preserving extension; chi from
// the recursive definition of mu. Independent of the breadth-first builder.
struct BruteLattice {
  std::map<std::uint64_t, int> rank;  // closed subset -> rank
  Poly chi;
};

BruteLattice brute_lattice(const Arrangement& a) {
  const std::size_t n = a.size();
  REQUIRE(n <= 12);
  auto rk = [&](std::uint64_t s) {
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < n; ++i)
      if ((s >> i) & 1) rows.push_back(a[i].covector());
    return static_cast<int>(rank_of_rows(a.field(), a.dim(), rows));
  };
  BruteLattice out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    const int r = rk(s);
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i) {
      if (!((s >> i) & 1) && rk(s | (std::uint64_t{1} << i)) == r) closed = false;
    }
    if (closed) out.rank[s] = r;
  }
  std::map<std::uint64_t, std::int64_t> mu;
  std::vector<std::int64_t> coeffs(a.dim() + 1, 0);
  std::vector<std::pair<int, std::uint64_t>> order;
  for (const auto& [s, r] : out.rank) order.emplace_back(r, s);
  std::sort(order.begin(), order.end());
  for (const auto& [r, s] : order) {
    std::int64_t m = s == 0 ? 1 : 0;
    if (s != 0) {
      for (const auto& [t, v] : mu)
        if ((t & s) == t && t != s) m -= v;
    }
    mu[s] = m;
    coeffs[a.dim() - static_cast<std::size_t>(r)] += m;
  }
  out.chi = Poly(coeffs);
  return out;
}

std::uint64_t mask_of(const IndexSet& s) {
  std::uint64_t m = 0;
  s.for_each([&](int i) { m |= std::uint64_t{1} << i; });
  return m;
}

std::int64_t choose2(std::int64_t n) { return n * (n - 1) / 2; }

}  // namespace

TEST_CASE("flat counts and characteristic polynomials") {
  const Lattice b3 = Lattice::build(catalog::boolean(3));
  CHECK(b3.size() == 8);
  CHECK(b3.charpoly() == Poly::from_roots({1, 1, 1}));
  CHECK(b3.charpoly().str() == "(t-1)^3");
  CHECK(b3.rank2_profile() == std::map<int, int>{{2, 3}});

  const CyclotomicField q = CyclotomicField::make(1);
  CHECK(Lattice::build(Arrangement(q, 3)).charpoly() == Poly::monomial(1, 3));

  const Arrangement g31 = catalog::build("g31");
  const Lattice L31 = Lattice::build(g31);
  CHECK(L31.layer(2).size() == 710);
  CHECK(L31.rank2_profile() == std::map<int, int>{{2, 360}, {3, 320}, {6, 30}});
  CHECK(L31.charpoly() == Poly::from_roots({1, 13, 17, 29}));
  CHECK(profile_str(L31.rank2_profile()) == "2^360 3^320 6^30");

  CHECK(Lattice::build(catalog::build("g24")).charpoly() == Poly::from_roots({1, 9, 11}));
}

TEST_CASE("localizations of A(G31) at rank-2 flats") {
  const Arrangement g31 = catalog::build("g31");
  const Lattice L = Lattice::build(g31);
  const Poly g422 = Lattice::build(catalog::build("g422")).charpoly();
  std::size_t six = 0, two = 0;
  for (int x : L.layer(2)) {
    const Arrangement ax = localization(g31, L, x).essentialize();
    if (ax.size() == 6) {
      ++six;
      CHECK(Lattice::build(ax).charpoly() == g422);
    } else if (ax.size() == 2) {
      ++two;
      CHECK(Lattice::build(ax).charpoly() == Poly::from_roots({1, 1}));
    }
  }
  CHECK(six == 30);
  CHECK(two == 360);

  const Lattice b3 = Lattice::build(catalog::boolean(3));
  CHECK(localization(catalog::boolean(3), b3, b3.top()).key() == catalog::boolean(3).key());
  CHECK(localization(catalog::boolean(3), b3, b3.bottom()).empty());
  CHECK_THROWS_AS(localization(g31, b3, 0), InvalidArgument);
}

TEST_CASE("joins and modularity") {
  const Lattice b3 = Lattice::build(catalog::boolean(3));
  for (std::size_t x = 0; x < b3.size(); ++x) {
    CHECK(b3.flat_join(static_cast<int>(x), static_cast<int>(x)) == std::optional<int>(static_cast<int>(x)));
    for (std::size_t y = 0; y < b3.size(); ++y) CHECK(b3.flat_join(static_cast<int>(x), static_cast<int>(y)));
    CHECK(b3.is_modular(static_cast<int>(x)));
  }
  CHECK(b3.supersolvable_chain().has_value());
  CHECK(Lattice::build(catalog::build("g422")).supersolvable_chain().has_value());
  CHECK_FALSE(Lattice::build(catalog::build("g24")).supersolvable_chain().has_value());

  // Two six-fold flats of A(G31) sharing no hyperplane and spanning V: their sum is the zero flat.
  const Lattice L = Lattice::build(catalog::build("g31"));
  std::vector<int> sixes;
  for (int x : L.layer(2))
    if (L.flat(static_cast<std::size_t>(x)).members.count() == 6) sixes.push_back(x);
  bool found = false;
  for (std::size_t i = 0; i < sixes.size() && !found; ++i) {
    for (std::size_t j = i + 1; j < sixes.size() && !found; ++j) {
      const int x = sixes[i], y = sixes[j];
      if (L.flat(static_cast<std::size_t>(x)).members.intersects(L.flat(static_cast<std::size_t>(y)).members)) continue;
      if (L.closure_join(x, y) != L.top()) continue;
      found = true;
      CHECK(L.flat_join(x, y) == std::optional<int>(L.bottom()));
    }
  }
  CHECK(found);
}

TEST_CASE("A_12 is supersolvable with the stated modular flat") {
  Arrangement a = catalog::g24_resolved();
  const Lattice L = Lattice::build(a);
  IndexSet xs;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].covector()[2].is_zero()) xs.set(i);
  const auto x = L.find(xs);
  REQUIRE(x);
  CHECK(L.flat(static_cast<std::size_t>(*x)).rank == 2);
  CHECK(L.is_modular(*x));
  CHECK(L.supersolvable_chain().has_value());
}

TEST_CASE("breadth-first lattice agrees with brute force") {
  for (const char* name : {"g422", "g333", "boolean3", "g222"}) {
    const Arrangement a = catalog::build(name);
    const BruteLattice bl = brute_lattice(a);
    const Lattice L = Lattice::build(a);
    CAPTURE(name);
    CHECK(L.size() == bl.rank.size());
    for (std::size_t x = 0; x < L.size(); ++x) {
      const auto it = bl.rank.find(mask_of(L.flat(x).members));
      REQUIRE(it != bl.rank.end());
      CHECK(it->second == L.flat(x).rank);
    }
    CHECK(L.charpoly() == bl.chi);
  }
}

TEST_CASE("budget") {
  CHECK_THROWS_AS(Lattice::build(catalog::build("g31"), std::nullopt, 100), BudgetExceeded);
  const Lattice partial = Lattice::build(catalog::build("g31"), 2);
  CHECK_FALSE(partial.complete());
  CHECK(partial.layer(2).size() == 710);
}

TEST_CASE("property: lattice invariants on random arrangements") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 80; ++trial) {
    const int order = trial % 2 == 0 ? 1 : 4;
    const std::size_t dim = 2 + static_cast<std::size_t>(trial % 3);
    const Arrangement a = random_arrangement(rng, order, dim, 3 + static_cast<std::size_t>(trial % 7));
    CAPTURE(arr_serialize(a));
    const Lattice L = Lattice::build(a);
    const Poly chi = L.charpoly();

    // Against the brute-force oracle.
    const BruteLattice bl = brute_lattice(a);
    CHECK(L.size() == bl.rank.size());
    CHECK(chi == bl.chi);

    // Whitney deletion-restriction.
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(chi == Lattice::build(a.without_index(i)).charpoly() - Lattice::build(a.restrict_to_index(i)).charpoly());
    }

    // Sign alternation of mu.
    const auto& mu = L.mobius();
    for (std::size_t x = 0; x < L.size(); ++x) {
      CHECK(mu[x] != 0);
      CHECK((mu[x] > 0) == (L.flat(x).rank % 2 == 0));
    }

    // Each pair of hyperplanes spans exactly one rank-2 flat.
    std::int64_t pairs = 0;
    for (auto [k, m] : L.rank2_profile()) pairs += choose2(k) * m;
    CHECK(pairs == choose2(static_cast<std::int64_t>(a.size())));

    // Order independence.
    std::vector<std::size_t> perm(a.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Hyperplane> hs;
    for (auto i : perm) hs.push_back(a[i]);
    const Lattice P = Lattice::build(Arrangement(a.field(), a.dim(), hs));
    std::set<std::uint64_t> orig, back;
    for (std::size_t x = 0; x < L.size(); ++x) orig.insert(mask_of(L.flat(x).members));
    for (std::size_t x = 0; x < P.size(); ++x) {
      std::uint64_t m = 0;
      P.flat(x).members.for_each([&](int j) { m |= std::uint64_t{1} << perm[static_cast<std::size_t>(j)]; });
      back.insert(m);
    }
    CHECK(orig == back);

    // Products multiply characteristic polynomials.
    const Arrangement b = random_arrangement(rng, order, 2, 3);
    CHECK(Lattice::build(product(a, b)).charpoly() == chi * Lattice::build(b).charpoly());
  }
}
