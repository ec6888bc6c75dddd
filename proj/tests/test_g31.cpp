#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "hyperarr/catalog.hpp"
#include "hyperarr/freeness.hpp"
#include "hyperarr/g31.hpp"
#include "hyperarr/sweep.hpp"

using namespace hyperarr;

namespace {

struct Fixture {
  Arrangement a = catalog::build("g31");
  std::shared_ptr<Pool> p = Pool::make(a);
  g31::Partition part = g31::compute_partition(*p);
  Searcher s;
  CertPtr cert = s.divisional(*p, p->all()).cert;
};

Fixture& fx() {
  static Fixture f;
  return f;
}

// Rank-2 flats of the pool containing atom h.
std::vector<int> flats_through(const Pool& p, int h) {
  std::vector<int> out;
  for (int x : p.lattice().layer(2))
    if (p.lattice().flat(static_cast<std::size_t>(x)).members.test(static_cast<std::size_t>(h))) out.push_back(x);
  return out;
}

}  // namespace

TEST_CASE("blocks") {
  Fixture& f = fx();
  CHECK(f.part.blocks.size() == 15);
  IndexSet seen;
  for (const auto& b : f.part.blocks) {
    CHECK(b.count() == 4);
    CHECK_FALSE(b.intersects(seen));
    seen |= b;
  }
  CHECK(seen == f.p->all());

  IndexSet coords;
  for (std::size_t i = 0; i < 4; ++i) {
    Vec v(4, f.a.field().zero());
    v[i] = f.a.field().one();
    coords.set(*f.p->index_of(Hyperplane(v)));
  }
  CHECK(std::find(f.part.blocks.begin(), f.part.blocks.end(), coords) != f.part.blocks.end());
}

TEST_CASE("stars") {
  Fixture& f = fx();
  REQUIRE(f.part.stars.size() == 6);
  std::vector<int> in_stars(15, 0);
  for (const auto& star : f.part.stars)
    for (int b : star) ++in_stars[static_cast<std::size_t>(b)];
  for (int c : in_stars) CHECK(c == 2);

  const Lattice& L = f.p->lattice();
  for (std::size_t i = 0; i < 6; ++i) {
    const IndexSet rest = f.p->all() - f.part.m[i];
    CHECK(rest.count() == 40);
    CHECK(f.p->charpoly(rest) == Poly::from_roots({1, 9, 13, 17}));
    // Blocks of one star pairwise meet a common triple flat.
    const auto& star = f.part.stars[i];
    for (std::size_t x = 0; x < 5; ++x) {
      for (std::size_t y = x + 1; y < 5; ++y) {
        const IndexSet& bx = f.part.blocks[static_cast<std::size_t>(star[x])];
        const IndexSet& by = f.part.blocks[static_cast<std::size_t>(star[y])];
        bool linked = false;
        for (int t : L.layer(2)) {
          const IndexSet& m = L.flat(static_cast<std::size_t>(t)).members;
          if (m.count() == 3 && m.intersects(bx) && m.intersects(by)) linked = true;
        }
        CHECK(linked);
      }
    }
  }
  CHECK(g31::grid_text(f.part).find("M6") != std::string::npos);

  // The catalog's A(G29) is one of the six complements.
  const Arrangement a29 = catalog::build("g29");
  IndexSet g29;
  for (const auto& h : a29.hyperplanes()) g29.set(*f.p->index_of(h));
  CHECK(std::count_if(f.part.m.begin(), f.part.m.end(), [&](const IndexSet& m) { return f.p->all() - m == g29; }) == 1);
}

TEST_CASE("trichotomy") {
  Fixture& f = fx();
  const g31::TrichotomyReport t = g31::trichotomy_check(*f.p, f.part);
  CHECK(t.violations == 0);
  CHECK(t.six == 180);
  CHECK(t.triangle == 960);
  CHECK(t.simple == 720);
  CHECK(t.per_hyperplane == std::map<std::string, std::size_t>{{"3,16,12", 60}});

  // Direct checks of the two block conditions on the lattice.
  const Lattice& L = f.p->lattice();
  for (int h = 0; h < 60; ++h) {
    const int bh = f.part.block_of[static_cast<std::size_t>(h)];
    std::size_t flats = 0;
    for (int x : flats_through(*f.p, h)) {
      ++flats;
      const IndexSet& m = L.flat(static_cast<std::size_t>(x)).members;
      if (m.count() == 6) {
        IndexSet others = m & f.part.blocks[static_cast<std::size_t>(bh)];
        others.reset(static_cast<std::size_t>(h));
        CHECK(others.count() == 1);
      } else if (m.count() == 2) {
        IndexSet k = m;
        k.reset(static_cast<std::size_t>(h));
        const int bk = f.part.block_of[k.first()];
        const auto lh = f.part.label[static_cast<std::size_t>(bh)];
        const auto lk = f.part.label[static_cast<std::size_t>(bk)];
        CHECK(lh[0] != lk[0]);
        CHECK(lh[0] != lk[1]);
        CHECK(lh[1] != lk[0]);
        CHECK(lh[1] != lk[1]);
      }
    }
    CHECK(flats == 31);
  }
}

TEST_CASE("filtration ladder along every M_i") {
  Fixture& f = fx();
  std::mt19937_64 rng(3);
  for (const auto& m : f.part.m) {
    std::vector<int> order = m.to_vector();
    std::shuffle(order.begin(), order.end(), rng);
    const FiltrationReport r = verify_filtration(f.s, *f.p, f.p->all(), f.cert, order);
    REQUIRE(r.ok);
    for (const auto& st : r.steps) {
      Exponents want{1, 13, 17, 29 - static_cast<std::int64_t>(st.index)};
      std::sort(want.begin(), want.end());
      CHECK(st.exponents == want);
      CHECK(st.restriction_size == 31);
    }
  }
}

TEST_CASE("FFSA prediction") {
  Fixture& f = fx();
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int> v = f.part.m[static_cast<std::size_t>(trial % 6)].to_vector();
    std::shuffle(v.begin(), v.end(), rng);
    v.resize(1 + static_cast<std::size_t>(trial % 20));
    CHECK(g31::ffsa_predict(*f.p, f.part, IndexSet::of(v)));
  }

  for (int b = 0; b < 15; b += 4) {
    f.part.blocks[static_cast<std::size_t>(b)].for_each([&](int h) {
      const IndexSet n = g31::minimal_n(*f.p, f.part, b, h);
      CHECK(n.count() == 13);
      CHECK(g31::ffsa_predict(*f.p, f.part, n));
      const IndexSet rest = f.p->all() - n;
      rest.for_each([&](int k) { CHECK(f.p->restriction_size(rest, k) <= 29); });
    });
  }

  // A small N failing (*) is never a filtration subarrangement.
  std::size_t violating = 0;
  for (int trial = 0; trial < 400 && violating < 5; ++trial) {
    std::vector<int> v = f.p->all().to_vector();
    std::shuffle(v.begin(), v.end(), rng);
    v.resize(3 + static_cast<std::size_t>(trial % 3));
    const IndexSet n = IndexSet::of(v);
    if (condition_star(*f.p, n)) continue;
    ++violating;
    CHECK_FALSE(g31::ffsa_predict(*f.p, f.part, n));
    CHECK(g31::find_filtration(f.s, *f.p, f.p->all(), f.cert, n).result == g31::Search::NotFound);
  }
  const bool found = violating == 5;
  CHECK(found);
}

TEST_CASE("property: condition (*) is inherited by subsets") {
  Fixture& f = fx();
  std::mt19937_64 rng(21);
  std::size_t satisfied = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> v = trial % 2 ? f.part.m[rng() % 6].to_vector() : f.p->all().to_vector();
    std::shuffle(v.begin(), v.end(), rng);
    v.resize(2 + rng() % 12);
    const IndexSet n = IndexSet::of(v);
    if (!condition_star(*f.p, n)) continue;
    ++satisfied;
    for (int k = 0; k < 5; ++k) {
      IndexSet sub;
      n.for_each([&](int h) {
        if (rng() % 2) sub.set(static_cast<std::size_t>(h));
      });
      CHECK(condition_star(*f.p, sub));
    }
  }
  CHECK(satisfied > 50);
}

TEST_CASE("cross-validation of the FFSA characterization") {
  Fixture& f = fx();
  const g31::CrossValidateReport r = g31::ffsa_cross_validate(f.s, *f.p, f.part, f.cert, {});
  CHECK(r.mismatches == 0);
  CHECK(r.undecided == 0);
  CHECK(r.agree == r.samples);
  CHECK(r.samples > 2000);
  CHECK(r.minimal_40);
  CHECK(r.minimal_nonfree == 240);
}

TEST_CASE("no free additions to sampled FFSAs") {
  Fixture& f = fx();
  const CandidateSet cands = enumerate_candidates(*f.p);
  const g31::NoAdditionReport r = g31::ffsa_no_addition_sweep(f.s, *f.p, f.part, f.cert, 20, 0, {}, &cands);
  CHECK(r.samples.size() == 20);
  CHECK(r.external_survivors == 0);
  CHECK(r.all_complete);

  // A mid-filtration state with 50 hyperplanes.
  std::vector<int> order = f.part.m[1].to_vector();
  order.resize(10);
  const FiltrationReport fr = verify_filtration(f.s, *f.p, f.p->all(), f.cert, order);
  REQUIRE(fr.ok);
  const IndexSet b = f.p->all() - IndexSet::of(order);
  const SweepReport s = no_free_addition(*f.p, b, fr.steps.back().exponents, {}, &cands);
  CHECK(b.count() == 50);
  CHECK(s.complete);
  CHECK(s.survivors.empty());
  for (const auto& o : s.internal_survivors) CHECK(f.p->index_of(o.hyperplane).has_value());
}

TEST_CASE("single deletions from A(G29) are not free") {
  Fixture& f = fx();
  const IndexSet b = f.p->all() - f.part.m[5];
  const FiltrationReport fr = verify_filtration(f.s, *f.p, f.p->all(), f.cert, f.part.m[5].to_vector());
  REQUIRE(fr.ok);
  b.for_each([&](int h) {
    const CertPtr c = g31::deletion_nonfree(f.s, *f.p, b, fr.final_cert, h);
    CHECK(c->status == Status::NonFree);
    CHECK(cert_verify(f.p->arrangement(b - IndexSet::of({h})), *c).ok);
  });
}
