#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "hyperarr/catalog.hpp"
#include "hyperarr/errors.hpp"
#include "hyperarr/freeness.hpp"
#include "hyperarr/g31.hpp"
#include "hyperarr/lattice.hpp"
#include "hyperarr/sweep.hpp"

using namespace hyperarr;

namespace {

Hyperplane hp(CyclotomicField f, std::vector<std::string> coords) { return Hyperplane::parse(f, coords); }

std::int64_t sum(const Exponents& e) { return std::accumulate(e.begin(), e.end(), std::int64_t{0}); }

Arrangement random_arrangement(std::mt19937_64& rng, int order, std::size_t dim, std::size_t n) {
  const CyclotomicField f = CyclotomicField::make(order);
  const std::vector<std::string> pool = order == 1 ? std::vector<std::string>{"0", "1", "-1", "2"}
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

Poly chi(const Arrangement& a) { return Lattice::build(a).charpoly(); }

}  // namespace

TEST_CASE("exponents from characteristic polynomials") {
  CHECK(exponents_from_charpoly(Poly::from_roots({1, 9, 11}), 21) == Exponents{1, 9, 11});
  CHECK(exponents_from_charpoly(Poly::from_roots({1, 15, 16, 29}), 61) == Exponents{1, 15, 16, 29});
  CHECK_FALSE(exponents_from_charpoly(Poly({3, -3, 1}), 3));
  CHECK(exponents_str({1, 13, 17, 29}) == "{{1,13,17,29}}");
}

TEST_CASE("addition-deletion inference") {
  SUBCASE("A(G24) plus H_1") {
    const Arrangement a = catalog::build("g24").with(catalog::g24_resolution().front());
    const Hyperplane& h = a[a.size() - 1];
    FactRegistry facts;
    facts.insert(a.without(h).key(), {Status::Free, {1, 9, 11}, "test"});
    facts.insert(a.restrict_to(h).key(), {Status::Free, {1, 11}, "test"});
    const ADInference r = check_addition_deletion(a, h, facts);
    CHECK(r.inferred == "A");
    CHECK(r.fact.exponents == Exponents{1, 10, 11});
    CHECK(facts.lookup(a.key())->exponents == Exponents{1, 10, 11});

    // Symmetric consistency: from A and A'' the deletion comes back with its exponents.
    FactRegistry back;
    back.insert(a.key(), r.fact);
    back.insert(a.restrict_to(h).key(), {Status::Free, {1, 11}, "test"});
    const ADInference d = check_addition_deletion(a, h, back);
    CHECK(d.inferred == "deletion");
    CHECK(d.fact.exponents == Exponents{1, 9, 11});
  }
  SUBCASE("Boolean_3 by addition") {
    const Arrangement b3 = catalog::boolean(3);
    FactRegistry facts;
    facts.insert(b3.without_index(2).key(), {Status::Free, {0, 1, 1}, "rank 2"});
    facts.insert(b3.restrict_to_index(2).key(), {Status::Free, {1, 1}, "rank 2"});
    CHECK(check_addition_deletion(b3, b3[2], facts).fact.exponents == Exponents{1, 1, 1});
  }
  SUBCASE("A(G31) deletion") {
    const Arrangement a = catalog::build("g31");
    FactRegistry facts;
    facts.insert(a.key(), {Status::Free, {1, 13, 17, 29}, "test"});
    facts.insert(a.restrict_to_index(0).key(), {Status::Free, {1, 13, 17}, "test"});
    const ADInference r = check_addition_deletion(a, a[0], facts);
    CHECK(r.inferred == "deletion");
    CHECK(r.fact.exponents == Exponents{1, 13, 17, 28});
  }
  SUBCASE("contradicting facts are rejected") {
    FactRegistry facts;
    const Arrangement b3 = catalog::boolean(3);
    facts.insert(b3.key(), {Status::Free, {1, 1, 1}, "test"});
    CHECK_FALSE(facts.insert(b3.key(), {Status::Free, {1, 1, 1}, "again"}));
    CHECK_THROWS_AS(facts.insert(b3.key(), {Status::NonFree, {}, "test"}), ValidationError);
  }
  FactRegistry empty;
  CHECK_THROWS_AS(check_addition_deletion(catalog::boolean(2), hp(CyclotomicField::make(1), {"1", "1"}), empty),
                  InvalidArgument);
}

TEST_CASE("divisional freeness") {
  const CyclotomicField q = CyclotomicField::make(1);
  const Arrangement lines(q, 2, {hp(q, {"1", "0"}), hp(q, {"0", "1"}), hp(q, {"1", "1"}), hp(q, {"1", "2"})});
  CHECK(divisionally_free(lines).membership == Membership::Member);
  CHECK(divisionally_free(catalog::boolean(4)).membership == Membership::Member);
  const ClassResult g31 = divisionally_free(catalog::build("g31"));
  CHECK(g31.membership == Membership::Member);
  CHECK(g31.exponents == Exponents{1, 13, 17, 29});
  REQUIRE(g31.cert);
  CHECK(g31.cert->rule == "division");
  CHECK(cert_verify(catalog::build("g31"), *g31.cert).ok);
}

TEST_CASE("inductive freeness") {
  for (const char* name : {"boolean3", "g422", "g313", "g24_a12"}) {
    CAPTURE(name);
    const Arrangement a = catalog::build(name);
    const ClassResult r = inductively_free(a);
    CHECK(r.membership == Membership::Member);
    REQUIRE(r.cert);
    CHECK(cert_verify(a, *r.cert).ok);
  }
  const ClassResult g333 = inductively_free(catalog::build("g333"));
  CHECK(g333.membership == Membership::NonMember);
  CHECK_FALSE(g333.reason.empty());

  SearchOptions tiny;
  tiny.node_budget = 3;
  const ClassResult capped = inductively_free(catalog::build("g33_a1_tilde"), nullptr, tiny);
  CHECK(capped.membership == Membership::Unknown);
  CHECK_FALSE(capped.reason.empty());
}

TEST_CASE("recursive freeness") {
  const ClassResult g333 = recursively_free_search(catalog::build("g333"), catalog::pool("coordinates3"), 3);
  CHECK(g333.membership == Membership::Member);
  CHECK(g333.exponents == Exponents{1, 4, 4});
  const ClassResult g24 =
      recursively_free_search(catalog::build("g24"), catalog::g24_resolution(), 12, &catalog::seeded_facts());
  CHECK(g24.membership == Membership::Member);
  REQUIRE(g24.cert);
  CHECK(cert_verify(catalog::build("g24"), *g24.cert, &catalog::seeded_facts()).ok);
  CHECK(recursively_free_search(catalog::boolean(3), {}, 0).membership == Membership::Member);
}

TEST_CASE("product exponents") {
  CHECK(product_exponents({0}, {0}) == Exponents{0, 0});
  CHECK(product_exponents({1}, {1, 9, 11}) == Exponents{1, 1, 9, 11});
  CHECK(product_exponents({1, 1}, {1, 1}) == Exponents{1, 1, 1, 1});
  const Arrangement g24 = catalog::build("g24");
  const Arrangement a1(g24.field(), 1, {hp(g24.field(), {"1"})});
  const Arrangement a = product(a1, g24);
  const ClassResult r = certify_free(a, &catalog::seeded_facts());
  CHECK(r.freeness == Status::Free);
  CHECK(r.exponents == Exponents{1, 1, 9, 11});
  REQUIRE(r.cert);
  CHECK(cert_verify(a, *r.cert, &catalog::seeded_facts()).ok);
}

TEST_CASE("addition obstruction") {
  const Arrangement g31 = catalog::build("g31");
  const Exponents e{1, 13, 17, 29};
  const CyclotomicField f = g31.field();
  const Obstruction generic = addition_obstruction(g31, e, hp(f, {"1", "2", "3", "5"}));
  CHECK(generic.sum == 0);
  CHECK_FALSE(generic.passes);

  // A hyperplane through one six-fold flat and no other rank-2 flat.
  const Lattice L = Lattice::build(g31);
  int six = -1;
  for (int x : L.layer(2))
    if (L.flat(static_cast<std::size_t>(x)).members.count() == 6) six = x;
  REQUIRE(six >= 0);
  const auto members = L.flat(static_cast<std::size_t>(six)).members.to_vector();
  const Vec& u = g31[static_cast<std::size_t>(members[0])].covector();
  const Vec& v = g31[static_cast<std::size_t>(members[1])].covector();
  bool tried = false;
  for (int c = 7; c < 40 && !tried; ++c) {
    Vec w(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = u[i] + v[i] * Rational(c);
    const Obstruction o = addition_obstruction(g31, e, Hyperplane(w));
    if (o.flats != 1) continue;
    tried = true;
    CHECK(o.sum == 5);
    CHECK_FALSE(o.passes);
  }
  CHECK(tried);

  // Table row j = 5: adding H_5 to A(G24) u {H_1..H_4}.
  const auto res = catalog::g24_resolution();
  Arrangement a = catalog::build("g24");
  for (int j = 0; j < 4; ++j) a = a.with(res[static_cast<std::size_t>(j)]);
  const Obstruction o = addition_obstruction(a, {1, 11, 13}, res[4]);
  CHECK(o.sum == static_cast<std::int64_t>(a.size() - a.with(res[4]).restrict_to(res[4]).size()));
  CHECK(o.sum == 11);
  CHECK(o.passes);
}

TEST_CASE("candidate sweeps in dimension two") {
  const Arrangement b2 = catalog::boolean(2);
  const CandidateSet c = enumerate_candidates(b2);
  CHECK_FALSE(c.complete);
  const Hyperplane diag = hp(b2.field(), {"1", "-1"});
  CHECK(std::any_of(c.candidates.begin(), c.candidates.end(),
                    [&](const Candidate& x) { return x.hyperplane == diag; }));
  const SweepReport r = no_free_addition(b2, {1, 1});
  CHECK_FALSE(r.survivors.empty());
  CHECK(std::any_of(r.survivors.begin(), r.survivors.end(),
                    [&](const CandidateOutcome& x) { return x.hyperplane == diag; }));
}

TEST_CASE("condition (*)") {
  const CyclotomicField q = CyclotomicField::make(1);
  const Arrangement a(q, 3, {hp(q, {"1", "0", "0"}), hp(q, {"0", "1", "0"}), hp(q, {"0", "0", "1"}),
                             hp(q, {"1", "-1", "0"})});
  CHECK(condition_star(a, {a[0]}));
  CHECK_FALSE(condition_star(a, {a[0], a[1], a[3]}));
  CHECK_FALSE(condition_star(a, {a[0], a[2]}));

  const auto p = Pool::make(catalog::build("g31"));
  const g31::Partition part = g31::compute_partition(*p);
  for (const auto& m : part.m) CHECK(condition_star(*p, m));
}

TEST_CASE("free filtrations") {
  const Arrangement b3 = catalog::boolean(3);
  const FiltrationReport one = verify_filtration(b3, {b3[0]});
  CHECK(one.ok);
  REQUIRE(one.steps.size() == 1);
  CHECK(one.steps[0].exponents == Exponents{0, 1, 1});

  const Arrangement g31 = catalog::build("g31");
  const auto p = Pool::make(g31);
  const g31::Partition part = g31::compute_partition(*p);
  std::vector<Hyperplane> dels;
  part.m[2].for_each([&](int i) { dels.push_back(p->atom(static_cast<std::size_t>(i))); });
  const FiltrationReport f = verify_filtration(g31, dels);
  CHECK(f.ok);
  REQUIRE(f.steps.size() == 20);
  for (const auto& st : f.steps) {
    Exponents want{1, 13, 17, 29 - static_cast<std::int64_t>(st.index)};
    std::sort(want.begin(), want.end());
    CHECK(st.exponents == want);
  }
  CHECK(f.steps.back().exponents == Exponents{1, 9, 13, 17});

  const auto rc = catalog::g33_a1();
  std::vector<Hyperplane> six;
  for (int d : rc.deletions) six.push_back(rc.arrangement[static_cast<std::size_t>(d)]);
  CHECK(verify_filtration(rc.arrangement, six).ok);
}

TEST_CASE("resolution of A(G24)") {
  const ResolutionReport r =
      verify_resolution(catalog::build("g24"), catalog::g24_resolution(), &catalog::seeded_facts());
  CHECK(r.ok);
  REQUIRE(r.rows.size() == 12);
  CHECK(r.rows.front().exponents == Exponents{1, 10, 11});
  CHECK(r.rows.back().exponents == Exponents{1, 15, 17});
  CHECK(Lattice::build(r.final_arrangement).supersolvable_chain().has_value());
}

TEST_CASE("certificates: round trip and tampering") {
  const Arrangement b3 = catalog::boolean(3);
  const ClassResult r = inductively_free(b3);
  REQUIRE(r.cert);
  CHECK(cert_verify(b3, *r.cert).ok);

  const CertPtr back = cert_from_json(cert_to_json(*r.cert), b3.field());
  CHECK(cert_to_json(*back) == cert_to_json(*r.cert));
  CHECK(cert_verify(b3, *back).ok);

  Certificate tampered = *r.cert;
  tampered.exponents = {1, 1, 2};
  CHECK_FALSE(cert_verify(b3, tampered).ok);

  const Arrangement g24 = catalog::build("g24");
  const ClassResult fact = certify_free(g24, &catalog::seeded_facts());
  REQUIRE(fact.cert);
  CHECK(fact.cert->rule == "catalog_fact");
  CHECK(cert_verify(g24, *fact.cert, &catalog::seeded_facts()).ok);
  Certificate wrong_key = *fact.cert;
  wrong_key.key = b3.key().text;
  CHECK_FALSE(cert_verify(g24, wrong_key, &catalog::seeded_facts()).ok);
  CHECK_FALSE(cert_verify(g24, *fact.cert).ok);  // no registry to look the fact up in

  CHECK_THROWS_AS(cert_from_json(nlohmann::json{{"rule", 3}}, b3.field()), ParseError);
}

TEST_CASE("property: free verdicts on random arrangements") {
  std::mt19937_64 rng(5);
  std::size_t free_seen = 0, if_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    // Every third sample is a random subarrangement of A(G(3,1,3)), which is rich in free arrangements.
    Arrangement a = random_arrangement(rng, trial % 2 ? 1 : 4, 3 + static_cast<std::size_t>(trial % 2),
                                       4 + static_cast<std::size_t>(trial % 6));
    if (trial % 3 == 2) {
      const Arrangement g313 = catalog::build("g313");
      std::bernoulli_distribution coin(0.75);
      IndexSet keep;
      for (std::size_t i = 0; i < g313.size(); ++i)
        if (coin(rng)) keep.set(i);
      a = g313.subarrangement(keep);
    }
    CAPTURE(arr_serialize(a));
    const Poly c = chi(a);

    const ClassResult fr = certify_free(a);
    if (fr.freeness == Status::Free) {
      ++free_seen;
      CHECK(sum(fr.exponents) == static_cast<std::int64_t>(a.size()));
      CHECK(Poly::from_roots(fr.exponents) == c);
      REQUIRE(fr.cert);
      CHECK(cert_verify(a, *fr.cert).ok);
    }
    if (!exponents_from_charpoly(c, a.size())) CHECK(fr.freeness == Status::NonFree);

    // IF is contained in DF.
    const ClassResult ir = inductively_free(a);
    if (ir.membership == Membership::Member) {
      ++if_seen;
      CHECK(divisionally_free(a).membership != Membership::NonMember);
      CHECK(cert_verify(a, *ir.cert).ok);

      // Addition-deletion round trip along the first step of the certificate.
      for (std::size_t i = 0; i < a.size(); ++i) {
        const ClassResult d = certify_free(a.without_index(i));
        const ClassResult rr = certify_free(a.restrict_to_index(i));
        if (d.freeness != Status::Free || rr.freeness != Status::Free) continue;
        FactRegistry up;
        up.insert(a.without_index(i).key(), {Status::Free, d.exponents, "test"});
        up.insert(a.restrict_to_index(i).key(), {Status::Free, rr.exponents, "test"});
        const ADInference inf = check_addition_deletion(a, a[i], up);
        if (inf.inferred != "A") continue;
        CHECK(inf.fact.exponents == ir.exponents);
        FactRegistry down;
        down.insert(a.key(), inf.fact);
        down.insert(a.restrict_to_index(i).key(), {Status::Free, rr.exponents, "test"});
        CHECK(check_addition_deletion(a, a[i], down).fact.exponents == d.exponents);
      }

      // Every filtration step removes b hyperplanes' worth of traces with b an exponent.
      const FiltrationReport f = verify_filtration(a, {a[0]}, nullptr, ir.cert);
      for (const auto& st : f.steps) {
        if (!st.ok) continue;
        CHECK(std::find(ir.exponents.begin(), ir.exponents.end(), st.b) != ir.exponents.end());
        CHECK(st.restriction_size == st.size_before - static_cast<std::size_t>(st.b));
      }
    }
  }
  CHECK(free_seen > 10);
  CHECK(if_seen > 5);
}
