#include "hyperarr/freeness.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "hyperarr/errors.hpp"

namespace hyperarr {

std::string to_string(Membership m) {
  switch (m) {
    case Membership::Member:
      return "member";
    case Membership::NonMember:
      return "nonmember";
    case Membership::Unknown:
      break;
  }
  return "unknown";
}

CertPtr make_free_cert(std::string rule, Exponents exps, std::optional<Hyperplane> h, std::vector<CertPtr> children) {
  auto c = std::make_shared<Certificate>();
  c->rule = std::move(rule);
  c->status = Status::Free;
  c->exponents = std::move(exps);
  c->hyperplane = std::move(h);
  c->children = std::move(children);
  return c;
}

CertPtr make_nonfree_cert(std::string rule, std::string reason, std::optional<Hyperplane> h,
                          std::vector<CertPtr> children, std::int64_t value, std::string direction) {
  auto c = std::make_shared<Certificate>();
  c->rule = std::move(rule);
  c->status = Status::NonFree;
  c->reason = std::move(reason);
  c->hyperplane = std::move(h);
  c->children = std::move(children);
  c->value = value;
  c->direction = std::move(direction);
  return c;
}

CertPtr make_unknown_cert(std::string reason) {
  auto c = std::make_shared<Certificate>();
  c->rule = "unknown";
  c->status = Status::Unknown;
  c->reason = std::move(reason);
  return c;
}

namespace {

constexpr const char* kHeuristic = "deletions ordered by descending |A^H|, ties by covector key";

// Every Free verdict must satisfy sum = |B| and exps = roots of chi.
void assert_free(const Pool& p, const IndexSet& b, const Exponents& e) {
  const auto n = static_cast<std::int64_t>(b.count());
  if (e.size() != p.dim() || std::accumulate(e.begin(), e.end(), std::int64_t{0}) != n) {
    throw std::logic_error("free verdict with exponents " + exponents_str(e) + " violates the exponent sum");
  }
  auto roots = exponents_from_charpoly(p.charpoly(b), b.count());
  if (!roots || *roots != e) throw std::logic_error("free verdict with exponents " + exponents_str(e) + " differs from chi");
}

bool single(const Exponents& rest, std::int64_t v) { return rest.size() == 1 && rest[0] == v; }

}  // namespace

void Searcher::tick() {
  if (++nodes_ > node_cap_) throw BudgetExceeded("node budget of " + std::to_string(opts_.node_budget) + " exceeded");
}

std::vector<int> Searcher::deletion_order(const Pool& p, const IndexSet& b) const {
  std::vector<std::pair<std::size_t, int>> v;
  b.for_each([&](int h) { v.emplace_back(p.restriction_size(b, h), h); });
  std::sort(v.begin(), v.end(), [&](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return p.atom(static_cast<std::size_t>(x.second)).key() < p.atom(static_cast<std::size_t>(y.second)).key();
  });
  std::vector<int> out;
  for (auto& [_, h] : v) out.push_back(h);
  return out;
}

std::optional<Searcher::Outcome> Searcher::trivial(const Pool& p, const IndexSet& b, std::optional<Exponents>* roots) {
  const Poly chi = p.charpoly(b);
  *roots = exponents_from_charpoly(chi, b.count());
  if (!*roots) {
    return Outcome{Membership::NonMember, {}, make_nonfree_cert("nonfree_charpoly", "chi = " + chi.str() + " does not split"),
                   "characteristic polynomial does not split"};
  }
  if (p.rank(b) <= 2) return Outcome{Membership::Member, **roots, make_free_cert("base", **roots), ""};
  return std::nullopt;
}

std::optional<Searcher::Outcome> Searcher::supersolvable(const Pool& p, const IndexSet& b) {
  if (b != p.all()) return std::nullopt;
  std::optional<std::vector<int>> chain;
  try {
    chain = p.lattice().supersolvable_chain(opts_.supersolvable_budget);
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
  if (!chain) return std::nullopt;
  auto c = std::make_shared<Certificate>();
  c->rule = "supersolvable";
  c->status = Status::Free;
  std::size_t prev = 0;
  for (int x : *chain) {
    std::vector<Hyperplane> hs;
    const IndexSet& m = p.lattice().flat(static_cast<std::size_t>(x)).members;
    m.for_each([&](int i) { hs.push_back(p.atom(static_cast<std::size_t>(i))); });
    if (!c->chain.empty()) c->exponents.push_back(static_cast<std::int64_t>(m.count() - prev));
    prev = m.count();
    c->chain.push_back(std::move(hs));
  }
  while (c->exponents.size() < p.dim()) c->exponents.push_back(0);
  std::sort(c->exponents.begin(), c->exponents.end());
  assert_free(p, b, c->exponents);
  return Outcome{Membership::Member, c->exponents, c, ""};
}

Searcher::Outcome Searcher::if_rec(const Pool& p, const IndexSet& b) {
  auto& memo = if_memo_[&p];
  if (auto it = memo.find(b); it != memo.end()) return it->second;
  tick();
  std::optional<Exponents> roots;
  if (auto t = trivial(p, b, &roots)) return memo[b] = *t;
  if (auto s = supersolvable(p, b)) return memo[b] = *s;
  const Exponents& e = *roots;
  const std::size_t n = b.count();
  for (int h : deletion_order(p, b)) {
    const std::size_t nh = p.restriction_size(b, h);
    const auto bv = static_cast<std::int64_t>(n - nh);
    if (std::find(e.begin(), e.end(), bv) == e.end()) continue;
    const IndexSet s = p.restriction_atoms(b, h);
    auto child = p.child(h);
    auto e2 = exponents_from_charpoly(child->charpoly(s), nh);
    Exponents rest;
    if (!e2 || !multiset_contains(e, *e2, &rest) || !single(rest, bv)) continue;
    Outcome r2 = if_rec(*child, s);
    if (r2.m != Membership::Member) continue;
    IndexSet bp = b;
    bp.reset(static_cast<std::size_t>(h));
    Outcome r1 = if_rec(p, bp);
    if (r1.m != Membership::Member) continue;
    Exponents rest1;
    if (!multiset_contains(r1.exps, r2.exps, &rest1) || rest1.size() != 1) continue;
    auto ex = exponents_replace(r1.exps, rest1[0], rest1[0] + 1);
    if (!ex || *ex != e) throw std::logic_error("addition pattern disagrees with chi");
    assert_free(p, b, e);
    return memo[b] = Outcome{Membership::Member, e,
                             make_free_cert("addition", e, p.atom(static_cast<std::size_t>(h)), {r1.cert, r2.cert}), ""};
  }
  return memo[b] = Outcome{Membership::NonMember, {}, nullptr, "every deletion exhausted without an inductive pair"};
}

Searcher::Outcome Searcher::df_rec(const Pool& p, const IndexSet& b) {
  auto& memo = df_memo_[&p];
  if (auto it = memo.find(b); it != memo.end()) return it->second;
  tick();
  std::optional<Exponents> roots;
  if (auto t = trivial(p, b, &roots)) return memo[b] = *t;
  const Poly chi = p.charpoly(b);
  for (int h : deletion_order(p, b)) {
    const IndexSet s = p.restriction_atoms(b, h);
    auto child = p.child(h);
    if (!chi.divisible_by(child->charpoly(s))) continue;
    Outcome r = df_rec(*child, s);
    if (r.m != Membership::Member) continue;
    assert_free(p, b, *roots);
    return memo[b] = Outcome{Membership::Member, *roots,
                             make_free_cert("division", *roots, p.atom(static_cast<std::size_t>(h)), {r.cert}), ""};
  }
  return memo[b] = Outcome{Membership::NonMember, {}, nullptr, "no restriction in the class has a dividing polynomial"};
}

Searcher::Outcome Searcher::rf_rec(const Pool& p, const IndexSet& b, int depth) {
  auto& memo = rf_memo_[&p];
  const auto key = std::make_pair(b, depth);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  tick();
  std::optional<Exponents> roots;
  if (auto t = trivial(p, b, &roots)) return memo[key] = *t;
  if (auto s = supersolvable(p, b)) return memo[key] = *s;
  const Exponents& e = *roots;
  const std::size_t n = b.count();
  if (depth > 0) {
    const IndexSet outside = p.all() - b;
    for (int h : outside.to_vector()) {
      IndexSet bp = b;
      bp.set(static_cast<std::size_t>(h));
      auto ep = exponents_from_charpoly(p.charpoly(bp), n + 1);
      if (!ep) continue;
      const std::size_t nh = p.restriction_size(bp, h);
      const auto bv = static_cast<std::int64_t>(n + 1 - nh);
      auto forced = exponents_replace(*ep, bv, bv - 1);
      if (!forced || *forced != e) continue;
      const IndexSet s = p.restriction_atoms(bp, h);
      auto child = p.child(h);
      Outcome r2 = if_rec(*child, s);
      Exponents rest;
      if (r2.m != Membership::Member || !multiset_contains(*ep, r2.exps, &rest) || !single(rest, bv)) continue;
      Outcome r1 = rf_rec(p, bp, depth - 1);
      if (r1.m != Membership::Member) continue;
      assert_free(p, b, e);
      return memo[key] = Outcome{Membership::Member, e,
                                 make_free_cert("deletion", e, p.atom(static_cast<std::size_t>(h)), {r1.cert, r2.cert}),
                                 ""};
    }
  }
  for (int h : deletion_order(p, b)) {
    const std::size_t nh = p.restriction_size(b, h);
    const auto bv = static_cast<std::int64_t>(n - nh);
    if (std::find(e.begin(), e.end(), bv) == e.end()) continue;
    const IndexSet s = p.restriction_atoms(b, h);
    auto child = p.child(h);
    auto e2 = exponents_from_charpoly(child->charpoly(s), nh);
    Exponents rest;
    if (!e2 || !multiset_contains(e, *e2, &rest) || !single(rest, bv)) continue;
    Outcome r2 = if_rec(*child, s);
    if (r2.m != Membership::Member) continue;
    IndexSet bp = b;
    bp.reset(static_cast<std::size_t>(h));
    Outcome r1 = rf_rec(p, bp, depth);
    if (r1.m != Membership::Member) continue;
    assert_free(p, b, e);
    return memo[key] = Outcome{Membership::Member, e,
                               make_free_cert("addition", e, p.atom(static_cast<std::size_t>(h)), {r1.cert, r2.cert}),
                               ""};
  }
  // Not finding a derivation says nothing about recursive freeness.
  return memo[key] = Outcome{Membership::Unknown, {}, nullptr, "no recursive derivation within the addition depth"};
}

Searcher::Outcome Searcher::free_rec(const Pool& p, const IndexSet& b) {
  auto& memo = free_memo_[&p];
  if (auto it = memo.find(b); it != memo.end()) return it->second;
  std::optional<Exponents> roots;
  if (auto t = trivial(p, b, &roots)) return memo[b] = *t;
  if (facts_ && facts_->size() > 0) {
    ArrKey k = p.key(b);
    auto f = facts_->lookup(k);
    if (!f) {
      k = p.arrangement(b).drop_zero_coordinates().key();
      f = facts_->lookup(k);
    }
    if (f && f->status != Status::Unknown) {
      auto c = std::make_shared<Certificate>();
      c->rule = "catalog_fact";
      c->status = f->status;
      c->exponents = pad_exponents(f->exponents, p.dim());
      c->key = k.text;
      c->source = f->source;
      if (f->status == Status::Free) {
        assert_free(p, b, c->exponents);
        return memo[b] = Outcome{Membership::Member, c->exponents, c, ""};
      }
      return memo[b] = Outcome{Membership::NonMember, {}, c, "registry fact"};
    }
  }
  const Arrangement arr = p.arrangement(b);
  const auto comps = arr.components();
  if (comps.size() > 1) {
    const std::vector<int> idx = b.to_vector();
    std::vector<CertPtr> kids;
    Exponents all;
    bool ok = true;
    for (const auto& comp : comps) {
      IndexSet sub;
      comp.for_each([&](int i) { sub.set(static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])); });
      Outcome r = free_rec(p, sub);
      if (r.m != Membership::Member) {
        ok = false;
        break;
      }
      kids.push_back(r.cert);
      for (auto x : r.exps)
        if (x) all.push_back(x);
    }
    if (ok) {
      while (all.size() < p.dim()) all.push_back(0);
      std::sort(all.begin(), all.end());
      assert_free(p, b, all);
      return memo[b] = Outcome{Membership::Member, all, make_free_cert("product", all, std::nullopt, kids), ""};
    }
  }
  Outcome d = df_rec(p, b);
  if (d.m == Membership::Member) return memo[b] = d;
  const std::size_t saved = node_cap_;
  node_cap_ = std::min(node_cap_, nodes_ + opts_.fallback_if_budget);
  try {
    Outcome i = if_rec(p, b);
    node_cap_ = saved;
    if (i.m == Membership::Member) return memo[b] = i;
  } catch (const BudgetExceeded&) {
    node_cap_ = saved;
    if (nodes_ > node_cap_) throw;
  }
  return Outcome{Membership::Unknown, {}, nullptr, "neither division nor a bounded inductive search applies"};
}

ClassResult Searcher::finish(Outcome o, std::size_t nodes_before, bool exhausted_means_nonmember) {
  ClassResult r;
  r.membership = o.m;
  if (o.m == Membership::NonMember && !exhausted_means_nonmember && !(o.cert && o.cert->status == Status::NonFree)) {
    r.membership = Membership::Unknown;
  }
  r.exponents = o.exps;
  r.reason = o.reason;
  r.nodes = nodes_ - nodes_before;
  if (o.m == Membership::Member) {
    r.freeness = Status::Free;
    auto c = std::make_shared<Certificate>(*o.cert);
    c->heuristic = kHeuristic;
    r.cert = c;
  } else if (o.cert && o.cert->status == Status::NonFree) {
    r.freeness = Status::NonFree;
    r.cert = o.cert;
  } else {
    r.cert = make_unknown_cert(o.reason);
  }
  return r;
}

ClassResult Searcher::inductive(const Pool& p, const IndexSet& b) {
  const std::size_t before = nodes_;
  node_cap_ = nodes_ + opts_.node_budget;
  try {
    return finish(if_rec(p, b), before, true);
  } catch (const BudgetExceeded& e) {
    return finish(Outcome{Membership::Unknown, {}, nullptr, e.what()}, before, false);
  }
}

ClassResult Searcher::divisional(const Pool& p, const IndexSet& b) {
  const std::size_t before = nodes_;
  node_cap_ = nodes_ + opts_.node_budget;
  try {
    return finish(df_rec(p, b), before, true);
  } catch (const BudgetExceeded& e) {
    return finish(Outcome{Membership::Unknown, {}, nullptr, e.what()}, before, false);
  }
}

ClassResult Searcher::recursive(const Pool& p, const IndexSet& b, int depth) {
  const std::size_t before = nodes_;
  node_cap_ = nodes_ + opts_.node_budget;
  try {
    return finish(rf_rec(p, b, depth), before, false);
  } catch (const BudgetExceeded& e) {
    return finish(Outcome{Membership::Unknown, {}, nullptr, e.what()}, before, false);
  }
}

ClassResult Searcher::free(const Pool& p, const IndexSet& b) {
  const std::size_t before = nodes_;
  node_cap_ = nodes_ + opts_.node_budget;
  try {
    return finish(free_rec(p, b), before, false);
  } catch (const BudgetExceeded& e) {
    return finish(Outcome{Membership::Unknown, {}, nullptr, e.what()}, before, false);
  }
}

ClassResult inductively_free(const Arrangement& a, const FactRegistry* facts, SearchOptions opts) {
  auto p = Pool::make(a, opts.flat_budget);
  Searcher s(opts, facts);
  return s.inductive(*p, p->all());
}

ClassResult divisionally_free(const Arrangement& a, const FactRegistry* facts, SearchOptions opts) {
  auto p = Pool::make(a, opts.flat_budget);
  Searcher s(opts, facts);
  return s.divisional(*p, p->all());
}

ClassResult recursively_free_search(const Arrangement& a, const std::vector<Hyperplane>& pool, int depth,
                                    const FactRegistry* facts, SearchOptions opts) {
  Arrangement master = a;
  for (const auto& h : pool) {
    if (!master.contains(h)) master = master.with(h);
  }
  auto p = Pool::make(master, opts.flat_budget);
  Searcher s(opts, facts);
  return s.recursive(*p, IndexSet::range(a.size()), depth);
}

ClassResult certify_free(const Arrangement& a, const FactRegistry* facts, SearchOptions opts) {
  auto p = Pool::make(a, opts.flat_budget);
  Searcher s(opts, facts);
  return s.free(*p, p->all());
}

ADInference check_addition_deletion(const Arrangement& a, const Hyperplane& h, FactRegistry& facts) {
  if (!a.contains(h)) throw InvalidArgument("hyperplane " + h.key() + " is not in the arrangement");
  const Arrangement del = a.without(h);
  const Arrangement res = a.restrict_to(h);
  auto known = [&](const Arrangement& x) -> std::optional<Exponents> {
    auto f = facts.lookup(x.key());
    if (f && f->status == Status::Free) return f->exponents;
    return std::nullopt;
  };
  const auto ea = known(a), e1 = known(del), e2 = known(res);
  ADInference out;
  auto record = [&](const Arrangement& x, Exponents e, const char* which) {
    if (std::accumulate(e.begin(), e.end(), std::int64_t{0}) != static_cast<std::int64_t>(x.size())) return;
    out.inferred = which;
    out.fact = Fact{Status::Free, std::move(e), "addition-deletion"};
    facts.insert(x.key(), out.fact);
  };
  Exponents rest;
  if (e1 && e2 && !ea) {
    if (multiset_contains(*e1, *e2, &rest) && rest.size() == 1) record(a, *exponents_replace(*e1, rest[0], rest[0] + 1), "A");
  } else if (ea && e2 && !e1) {
    if (multiset_contains(*ea, *e2, &rest) && rest.size() == 1) record(del, *exponents_replace(*ea, rest[0], rest[0] - 1), "deletion");
  } else if (ea && e1 && !e2) {
    for (auto x : *ea) {
      auto r = exponents_replace(*ea, x, x - 1);
      if (r && *r == *e1) {
        Exponents e = *ea;
        e.erase(std::find(e.begin(), e.end(), x));
        record(res, e, "restriction");
        break;
      }
    }
  }
  return out;
}

Exponents product_exponents(const Exponents& a, const Exponents& b) {
  Exponents r = a;
  r.insert(r.end(), b.begin(), b.end());
  std::sort(r.begin(), r.end());
  return r;
}

FiltrationReport verify_filtration(Searcher& s, const Pool& p, const IndexSet& start_set, CertPtr start_cert,
                                   const std::vector<int>& deletions) {
  FiltrationReport rep;
  if (!start_cert || start_cert->status != Status::Free) {
    rep.failure = "start arrangement not certified free";
    return rep;
  }
  IndexSet b = start_set;
  Exponents e = start_cert->exponents;
  rep.start_exponents = e;
  CertPtr cert = std::move(start_cert);
  for (std::size_t i = 0; i < deletions.size(); ++i) {
    const int h = deletions[i];
    FiltrationStep st{.index = i + 1, .hyperplane = p.atom(static_cast<std::size_t>(h))};
    auto fail = [&](const std::string& why) {
      st.failure = why;
      rep.steps.push_back(st);
      rep.failure = "step " + std::to_string(i + 1) + ": " + why;
      return rep;
    };
    if (!b.test(static_cast<std::size_t>(h))) return fail("hyperplane not in the current arrangement");
    st.size_before = b.count();
    st.restriction_size = p.restriction_size(b, h);
    st.b = static_cast<std::int64_t>(st.size_before - st.restriction_size);
    if (std::find(e.begin(), e.end(), st.b) == e.end()) return fail("|A| - |A^H| = " + std::to_string(st.b) + " is not an exponent");
    auto child = p.child(h);
    ClassResult r = s.free(*child, p.restriction_atoms(b, h));
    if (r.freeness != Status::Free) return fail("restriction not certified free (" + r.reason + ")");
    st.restriction_exponents = r.exponents;
    Exponents rest;
    if (!multiset_contains(e, r.exponents, &rest) || !single(rest, st.b))
      return fail("restriction exponents " + exponents_str(r.exponents) + " not contained in " + exponents_str(e));
    e = *exponents_replace(e, st.b, st.b - 1);
    b.reset(static_cast<std::size_t>(h));
    assert_free(p, b, e);
    st.exponents = e;
    st.ok = true;
    cert = make_free_cert("deletion", e, st.hyperplane, {cert, r.cert});
    rep.steps.push_back(std::move(st));
  }
  rep.ok = true;
  rep.final_cert = cert;
  return rep;
}

FiltrationReport verify_filtration(const Arrangement& a, const std::vector<Hyperplane>& deletions,
                                   const FactRegistry* facts, CertPtr start, SearchOptions opts) {
  auto p = Pool::make(a, opts.flat_budget);
  Searcher s(opts, facts);
  std::vector<int> idx;
  for (const auto& h : deletions) {
    auto i = a.index_of(h);
    if (!i) throw InvalidArgument("deletion " + h.key() + " is not in the arrangement");
    idx.push_back(static_cast<int>(*i));
  }
  if (!start) {
    ClassResult r = s.free(*p, p->all());
    if (r.freeness == Status::Free) start = r.cert;
  }
  return verify_filtration(s, *p, p->all(), start, idx);
}

ResolutionReport verify_resolution(const Arrangement& a, const std::vector<Hyperplane>& additions,
                                   const FactRegistry* facts, CertPtr start, SearchOptions opts) {
  ResolutionReport rep;
  Arrangement master = a;
  for (const auto& h : additions) {
    if (master.contains(h)) throw InvalidArgument("addition " + h.key() + " already present");
    master = master.with(h);
  }
  auto p = Pool::make(master, opts.flat_budget);
  Searcher s(opts, facts);
  IndexSet b = IndexSet::range(a.size());
  if (!start) {
    ClassResult r = s.free(*p, b);
    if (r.freeness == Status::Free) start = r.cert;
  }
  rep.final_arrangement = a;
  if (!start || start->status != Status::Free) {
    rep.failure = "start arrangement not certified free";
    return rep;
  }
  Exponents e = start->exponents;
  rep.start_exponents = e;
  CertPtr cert = std::move(start);
  for (std::size_t j = 0; j < additions.size(); ++j) {
    const int h = static_cast<int>(a.size() + j);
    ResolutionRow row{.index = j + 1, .hyperplane = p->atom(static_cast<std::size_t>(h))};
    b.set(static_cast<std::size_t>(h));
    ClassResult r = s.free(*p->child(h), p->restriction_atoms(b, h));
    Exponents rest;
    if (r.freeness != Status::Free) {
      row.failure = "restriction not certified free (" + r.reason + ")";
    } else if (!multiset_contains(e, r.exponents, &rest) || rest.size() != 1) {
      row.failure = "restriction exponents " + exponents_str(r.exponents) + " not contained in " + exponents_str(e);
    }
    if (!row.failure.empty()) {
      rep.rows.push_back(row);
      rep.failure = "row " + std::to_string(j + 1) + ": " + row.failure;
      return rep;
    }
    e = *exponents_replace(e, rest[0], rest[0] + 1);
    assert_free(*p, b, e);
    row.exponents = e;
    row.restriction_exponents = r.exponents;
    row.ok = true;
    cert = make_free_cert("addition", e, row.hyperplane, {cert, r.cert});
    rep.rows.push_back(std::move(row));
  }
  rep.ok = true;
  rep.final_cert = cert;
  rep.final_arrangement = p->arrangement(b);
  return rep;
}

}  // namespace hyperarr
