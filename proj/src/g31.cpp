#include "hyperarr/g31.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "hyperarr/errors.hpp"
#include "hyperarr/matrix.hpp"

namespace hyperarr::g31 {
namespace {

const Flat& flat(const Pool& p, int x) { return p.lattice().flat(static_cast<std::size_t>(x)); }

// The rank-2 flat spanned by atoms h and k.
int pair_flat(const Pool& p, int h, int k) {
  for (int x : flat(p, p.lattice().atom_flat(h)).upper) {
    if (flat(p, x).members.test(static_cast<std::size_t>(k))) return x;
  }
  throw std::logic_error("atoms without a common rank-2 flat");
}

[[noreturn]] void mismatch(const std::string& what) { throw ValidationError("construction mismatch: " + what); }

std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace

std::vector<IndexSet> compute_blocks(const Pool& a) {
  const Lattice& L = a.lattice();
  const int n = static_cast<int>(a.size());
  std::vector<IndexSet> adj(a.size());
  for (int x : L.layer(2)) {
    const IndexSet& m = flat(a, x).members;
    if (m.count() != 6) continue;
    m.for_each([&](int h) {
      adj[static_cast<std::size_t>(h)] |= m;
      adj[static_cast<std::size_t>(h)].reset(static_cast<std::size_t>(h));
    });
  }
  std::vector<IndexSet> blocks;
  for (int h1 = 0; h1 < n; ++h1) {
    const IndexSet n1 = adj[static_cast<std::size_t>(h1)];
    n1.for_each([&](int h2) {
      if (h2 <= h1) return;
      const IndexSet n2 = n1 & adj[static_cast<std::size_t>(h2)];
      n2.for_each([&](int h3) {
        if (h3 <= h2) return;
        const IndexSet n3 = n2 & adj[static_cast<std::size_t>(h3)];
        n3.for_each([&](int h4) {
          if (h4 <= h3) return;
          std::vector<Vec> rows;
          for (int h : {h1, h2, h3, h4}) rows.push_back(a.atom(static_cast<std::size_t>(h)).covector());
          if (rank_of_rows(a.field(), a.dim(), rows) == 4) blocks.push_back(IndexSet::of({h1, h2, h3, h4}));
        });
      });
    });
  }
  if (blocks.size() != 15) mismatch(std::to_string(blocks.size()) + " blocks instead of 15");
  IndexSet seen;
  for (const auto& b : blocks) {
    if (b.intersects(seen)) mismatch("blocks overlap");
    seen |= b;
  }
  if (seen != a.all()) mismatch("blocks do not cover the arrangement");
  return blocks;
}

Partition compute_stars(const Pool& a, std::vector<IndexSet> blocks) {
  Partition part;
  part.blocks = std::move(blocks);
  const int nb = static_cast<int>(part.blocks.size());
  part.block_of.assign(a.size(), -1);
  for (int b = 0; b < nb; ++b) {
    part.blocks[static_cast<std::size_t>(b)].for_each([&](int h) { part.block_of[static_cast<std::size_t>(h)] = b; });
  }
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(nb), std::vector<char>(static_cast<std::size_t>(nb), 0));
  for (int x : a.lattice().layer(2)) {
    const IndexSet& m = flat(a, x).members;
    if (m.count() != 3) continue;
    const auto v = m.to_vector();
    for (int i : v) {
      for (int j : v) {
        const int bi = part.block_of[static_cast<std::size_t>(i)], bj = part.block_of[static_cast<std::size_t>(j)];
        if (bi != bj) adj[static_cast<std::size_t>(bi)][static_cast<std::size_t>(bj)] = 1;
      }
    }
  }
  for (const auto& c : k_subsets(nb, 5)) {
    bool clique = true;
    for (std::size_t i = 0; i < 5 && clique; ++i) {
      for (std::size_t j = i + 1; j < 5 && clique; ++j) clique = adj[static_cast<std::size_t>(c[i])][static_cast<std::size_t>(c[j])];
    }
    if (clique) part.stars.push_back({c[0], c[1], c[2], c[3], c[4]});
  }
  if (part.stars.size() != 6) mismatch(std::to_string(part.stars.size()) + " stars instead of 6");
  std::vector<std::vector<int>> owners(static_cast<std::size_t>(nb));
  for (std::size_t s = 0; s < part.stars.size(); ++s) {
    IndexSet m;
    for (int b : part.stars[s]) {
      m |= part.blocks[static_cast<std::size_t>(b)];
      owners[static_cast<std::size_t>(b)].push_back(static_cast<int>(s));
    }
    const IndexSet rest = a.all() - m;
    if (m.count() != 20 || rest.count() != 40) mismatch("star union of size " + std::to_string(m.count()));
    const Poly want = Poly::from_roots({1, 9, 13, 17});
    if (a.charpoly(rest) != want) mismatch("complement of a star has chi " + a.charpoly(rest).str());
    part.m.push_back(m);
  }
  for (int b = 0; b < nb; ++b) {
    const auto& o = owners[static_cast<std::size_t>(b)];
    if (o.size() != 2) mismatch("block in " + std::to_string(o.size()) + " stars");
    part.label.push_back({o[0], o[1]});
  }
  return part;
}

Partition compute_partition(const Pool& a) { return compute_stars(a, compute_blocks(a)); }

TrichotomyReport trichotomy_check(const Pool& a, const Partition& part) {
  TrichotomyReport rep;
  auto lab = [&](int h) { return part.label[static_cast<std::size_t>(part.block_of[static_cast<std::size_t>(h)])]; };
  auto share = [](const std::array<int, 2>& x, const std::array<int, 2>& y) {
    int c = 0;
    for (int i : x)
      for (int j : y) c += i == j;
    return c;
  };
  auto violate = [&](int h, const IndexSet& m, const std::string& why) {
    ++rep.violations;
    if (rep.details.size() < 20) {
      std::ostringstream os;
      os << "H" << h << " flat {";
      m.for_each([&](int k) { os << " " << k << "(b" << part.block_of[static_cast<std::size_t>(k)] << ")"; });
      os << " }: " << why;
      rep.details.push_back(os.str());
    }
  };
  for (std::size_t h = 0; h < a.size(); ++h) {
    std::size_t six = 0, tri = 0, sim = 0;
    const auto lh = lab(static_cast<int>(h));
    for (int x : flat(a, a.lattice().atom_flat(static_cast<int>(h))).upper) {
      const IndexSet& m = flat(a, x).members;
      if (m.count() == 6) {
        std::map<int, int> per;
        m.for_each([&](int k) { ++per[part.block_of[static_cast<std::size_t>(k)]]; });
        bool ok = per.size() == 3;
        std::set<int> stars;
        for (auto [b, c] : per) {
          ok = ok && c == 2;
          for (int s : part.label[static_cast<std::size_t>(b)]) stars.insert(s);
        }
        ok = ok && stars.size() == 6;
        if (ok) ++six; else violate(static_cast<int>(h), m, "six-fold flat not spread 2+2+2 over disjointly labelled blocks");
      } else if (m.count() == 3) {
        std::set<int> bl, stars;
        m.for_each([&](int k) {
          bl.insert(part.block_of[static_cast<std::size_t>(k)]);
          for (int s : lab(k)) stars.insert(s);
        });
        bool ok = bl.size() == 3 && stars.size() == 3;
        if (ok) ++tri; else violate(static_cast<int>(h), m, "triple flat not over blocks ij, ik, jk");
      } else if (m.count() == 2) {
        IndexSet o = m;
        o.reset(h);
        if (share(lh, lab(static_cast<int>(o.first()))) == 0) ++sim; else violate(static_cast<int>(h), m, "simple flat partner shares a label");
      } else {
        violate(static_cast<int>(h), m, "flat of unexpected size " + std::to_string(m.count()));
      }
    }
    rep.six += six;
    rep.triangle += tri;
    rep.simple += sim;
    ++rep.per_hyperplane[std::to_string(six) + "," + std::to_string(tri) + "," + std::to_string(sim)];
  }
  return rep;
}

bool ffsa_predict(const Pool& a, const Partition& part, const IndexSet& n) {
  for (const auto& m : part.m) {
    if (n.subset_of(m)) return true;
  }
  return n.count() <= 13 && condition_star(a, n);
}

IndexSet minimal_n(const Pool& a, const Partition& part, int block, int h) {
  const IndexSet& b = part.blocks[static_cast<std::size_t>(block)];
  if (!b.test(static_cast<std::size_t>(h))) throw InvalidArgument("hyperplane not in the block");
  IndexSet n;
  b.for_each([&](int k) {
    if (k == h) return;
    IndexSet m = flat(a, pair_flat(a, h, k)).members;
    m.reset(static_cast<std::size_t>(k));
    n |= m;
  });
  return n;
}

std::string to_string(Search s) {
  switch (s) {
    case Search::Found:
      return "found";
    case Search::NotFound:
      return "not found";
    case Search::Unknown:
      break;
  }
  return "unknown";
}

FiltrationSearch find_filtration(Searcher& s, const Pool& a, const IndexSet& start, CertPtr start_cert,
                                 const IndexSet& n, std::size_t state_budget) {
  FiltrationSearch out;
  std::unordered_set<IndexSet> failed;
  bool undecided = false;
  std::vector<int> order;
  // Exponents depend only on the current set, so failure can be memoized by what is left to remove.
  std::function<bool(const IndexSet&, const Exponents&, CertPtr, const IndexSet&)> dfs =
      [&](const IndexSet& b, const Exponents& e, CertPtr cert, const IndexSet& rest) -> bool {
    if (rest.empty()) {
      out.exponents = e;
      out.cert = cert;
      return true;
    }
    if (failed.count(rest)) return false;
    if (++out.states > state_budget) {
      undecided = true;
      return false;
    }
    bool local_undecided = false;
    for (int h : rest.to_vector()) {
      const std::size_t nh = a.restriction_size(b, h);
      const auto bv = static_cast<std::int64_t>(b.count() - nh);
      if (std::find(e.begin(), e.end(), bv) == e.end()) continue;
      ClassResult r = s.free(*a.child(h), a.restriction_atoms(b, h));
      if (r.freeness == Status::Unknown) local_undecided = true;
      Exponents left;
      if (r.freeness != Status::Free || !multiset_contains(e, r.exponents, &left) || left.size() != 1 || left[0] != bv)
        continue;
      const Exponents e2 = *exponents_replace(e, bv, bv - 1);
      IndexSet b2 = b, rest2 = rest;
      b2.reset(static_cast<std::size_t>(h));
      rest2.reset(static_cast<std::size_t>(h));
      order.push_back(h);
      if (dfs(b2, e2, make_free_cert("deletion", e2, a.atom(static_cast<std::size_t>(h)), {cert, r.cert}), rest2)) return true;
      order.pop_back();
      if (undecided) return false;
    }
    if (local_undecided) {
      undecided = true;
      return false;
    }
    failed.insert(rest);
    return false;
  };
  if (!start_cert || start_cert->status != Status::Free) return out;
  if (dfs(start, start_cert->exponents, start_cert, n)) {
    out.result = Search::Found;
    out.order = order;
  } else {
    out.result = undecided ? Search::Unknown : Search::NotFound;
  }
  return out;
}

CertPtr deletion_nonfree(Searcher& s, const Pool& p, const IndexSet& b, CertPtr b_cert, int h) {
  IndexSet bp = b;
  bp.reset(static_cast<std::size_t>(h));
  const Hyperplane& hh = p.atom(static_cast<std::size_t>(h));
  const Poly chi = p.charpoly(bp);
  auto roots = exponents_from_charpoly(chi, bp.count());
  if (!roots) return make_nonfree_cert("nonfree_charpoly", "chi = " + chi.str() + " does not split");
  const Exponents& e = b_cert->exponents;
  const auto bv = static_cast<std::int64_t>(b.count() - p.restriction_size(b, h));
  if (std::find(e.begin(), e.end(), bv) == e.end()) {
    return make_nonfree_cert("nonfree_restriction_size", "|A u H| - |(A u H)^H| = " + std::to_string(bv) + " is not an exponent",
                             hh, {b_cert}, bv, "deletion");
  }
  if (*exponents_replace(e, bv, bv - 1) != *roots) {
    return make_nonfree_cert("nonfree_exponent_mismatch", "chi = " + chi.str() + " differs from the forced exponents", hh,
                             {b_cert}, bv, "deletion");
  }
  ClassResult r = s.free(*p.child(h), p.restriction_atoms(b, h));
  if (r.freeness == Status::NonFree) {
    return make_nonfree_cert("nonfree_restriction", "restriction is not free", hh, {b_cert, r.cert}, 0, "deletion");
  }
  return make_unknown_cert("no deletion rule excludes freeness");
}

namespace {

IndexSet random_subset(std::mt19937_64& rng, const std::vector<int>& from, std::size_t k) {
  std::vector<int> v = from;
  std::shuffle(v.begin(), v.end(), rng);
  v.resize(std::min(k, v.size()));
  return IndexSet::of(v);
}

std::vector<int> shuffled(std::mt19937_64& rng, const IndexSet& s) {
  std::vector<int> v = s.to_vector();
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

}  // namespace

CrossValidateReport ffsa_cross_validate(Searcher& s, const Pool& a, const Partition& part, CertPtr a_cert,
                                        const CrossValidateOptions& opts) {
  CrossValidateReport rep;
  std::mt19937_64 rng(opts.seed);
  const std::vector<int> all = a.all().to_vector();
  auto check = [&](const IndexSet& n) {
    const bool pred = ffsa_predict(a, part, n);
    FiltrationSearch f = find_filtration(s, a, a.all(), a_cert, n, opts.state_budget);
    ++rep.samples;
    auto& row = rep.by_size[n.count()];
    row[0] += pred;
    row[1] += f.result == Search::Found;
    if (f.result == Search::Unknown) {
      ++rep.undecided;
      return;
    }
    if ((f.result == Search::Found) == pred) {
      ++rep.agree;
      ++row[2];
      return;
    }
    ++rep.mismatches;
    if (rep.mismatch_details.size() < 10) {
      std::ostringstream os;
      os << "N = {";
      n.for_each([&](int h) { os << " " << h; });
      os << " }: predicted " << (pred ? "free filtration" : "none") << ", search " << to_string(f.result);
      rep.mismatch_details.push_back(os.str());
    }
  };
  for (std::size_t k = 1; k <= opts.exhaustive_up_to; ++k) {
    for (const auto& c : k_subsets(static_cast<int>(a.size()), static_cast<int>(k))) check(IndexSet::of(c));
  }
  for (std::size_t k = opts.exhaustive_up_to + 1; k <= opts.max_random_size; ++k) {
    for (std::size_t r = 0; r < opts.random_per_size; ++r) {
      switch (r % 3) {
        case 0:
          check(random_subset(rng, all, k));
          break;
        case 1:
          check(random_subset(rng, part.m[rng() % part.m.size()].to_vector(), k));
          break;
        default: {
          const int b = static_cast<int>(rng() % part.blocks.size());
          const auto hs = part.blocks[static_cast<std::size_t>(b)].to_vector();
          const IndexSet mn = minimal_n(a, part, b, hs[rng() % hs.size()]);
          check(random_subset(rng, mn.to_vector(), k));
        }
      }
    }
  }
  rep.minimal_40 = true;
  for (const auto& m : part.m) {
    for (std::size_t r = 0; r < std::max<std::size_t>(opts.m_orders, 1); ++r) {
      FiltrationReport fr = verify_filtration(s, a, a.all(), a_cert, shuffled(rng, m));
      ++rep.samples;
      auto& row = rep.by_size[m.count()];
      ++row[0];
      row[1] += fr.ok;
      if (fr.ok) {
        ++rep.agree;
        ++row[2];
      } else {
        ++rep.mismatches;
        rep.mismatch_details.push_back("M removal failed: " + fr.failure);
      }
      if (r > 0 || !fr.ok) continue;
      const IndexSet b = a.all() - m;
      b.for_each([&](int h) {
        ++rep.minimal_checked;
        if (deletion_nonfree(s, a, b, fr.final_cert, h)->status == Status::NonFree) ++rep.minimal_nonfree;
      });
    }
  }
  rep.minimal_40 = rep.minimal_checked == 6 * 40 && rep.minimal_nonfree == rep.minimal_checked;
  return rep;
}

NoAdditionReport ffsa_no_addition_sweep(Searcher& s, const Pool& a, const Partition& part, CertPtr a_cert,
                                        std::size_t count, std::uint64_t seed, SweepOptions opts,
                                        const CandidateSet* cands) {
  NoAdditionReport rep;
  CandidateSet own;
  if (!cands) {
    own = enumerate_candidates(a);
    cands = &own;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::string, IndexSet>> samples;
  samples.emplace_back("A", IndexSet{});
  for (std::size_t i = 0; i < part.m.size(); ++i) samples.emplace_back("A \\ M" + std::to_string(i + 1), part.m[i]);
  part.blocks[0].for_each([&](int h) { samples.emplace_back("minimal N at H" + std::to_string(h), minimal_n(a, part, 0, h)); });
  while (samples.size() < count) {
    const std::size_t i = rng() % part.m.size();
    const std::size_t k = 1 + rng() % 19;
    samples.emplace_back("A \\ (" + std::to_string(k) + " of M" + std::to_string(i + 1) + ")",
                         random_subset(rng, part.m[i].to_vector(), k));
  }
  samples.resize(std::min(samples.size(), count));
  for (const auto& [label, n] : samples) {
    SampleSweep ss;
    ss.label = label;
    const IndexSet b = a.all() - n;
    ss.size = b.count();
    FiltrationSearch f = find_filtration(s, a, a.all(), a_cert, n);
    if (f.result == Search::Found) {
      ss.certified = true;
      ss.exponents = f.exponents;
    } else {
      ss.exponents = exponents_from_charpoly(a.charpoly(b), b.count()).value_or(Exponents{});
    }
    ss.sweep = no_free_addition(a, b, ss.exponents, opts, cands);
    rep.external_survivors += ss.sweep.survivors.size();
    rep.all_complete = rep.all_complete && ss.sweep.complete;
    rep.samples.push_back(std::move(ss));
  }
  return rep;
}

std::string grid_text(const Partition& part) {
  const std::size_t k = part.stars.size();
  std::vector<std::vector<int>> cell(k, std::vector<int>(k, -1));
  for (std::size_t b = 0; b < part.label.size(); ++b) {
    const auto [i, j] = part.label[b];
    cell[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<int>(b);
    cell[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = static_cast<int>(b);
  }
  std::ostringstream os;
  os << "      ";
  for (std::size_t j = 0; j < k; ++j) os << "  M" << j + 1;
  os << "\n";
  for (std::size_t i = 0; i < k; ++i) {
    os << "  M" << i + 1 << "  ";
    for (std::size_t j = 0; j < k; ++j) {
      if (cell[i][j] < 0) {
        os << "   .";
      } else {
        std::string t = "B" + std::to_string(cell[i][j] + 1);
        os << std::string(4 - t.size(), ' ') << t;
      }
    }
    os << "\n";
  }
  for (std::size_t b = 0; b < part.blocks.size(); ++b) {
    os << "  B" << b + 1 << " = {";
    part.blocks[b].for_each([&](int h) { os << " H" << h + 1; });
    os << " }\n";
  }
  return os.str();
}

}  // namespace hyperarr::g31
