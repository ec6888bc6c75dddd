#include "hyperarr/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <set>
#include <thread>

#include "hyperarr/errors.hpp"
#include "hyperarr/matrix.hpp"

namespace hyperarr {

CandidateSet enumerate_candidates(const Pool& p) {
  const Lattice& L = p.lattice();
  if (!L.has_points()) throw InvalidArgument("candidate enumeration needs a pool built from an arrangement");
  CandidateSet out;
  std::map<std::string, std::pair<Hyperplane, std::set<int>>> found;
  auto add = [&](Vec v, std::initializer_list<int> flats) {
    Hyperplane h(std::move(v));
    if (p.index_of(h)) return;
    auto it = found.try_emplace(h.key(), h, std::set<int>{}).first;
    it->second.second.insert(flats);
  };
  if (L.rank() == 2 && p.dim() == 2) {
    out.complete = false;
    out.note = "dimension 2: every line contains the rank-2 flat; sampled alpha_H +- alpha_K";
    const int top = L.layer(2).front();
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = i + 1; j < p.size(); ++j) {
        const Vec& a = p.atom(i).covector();
        const Vec& b = p.atom(j).covector();
        Vec s, d;
        for (std::size_t k = 0; k < a.size(); ++k) {
          s.push_back(a[k] + b[k]);
          d.push_back(a[k] - b[k]);
        }
        if (!is_zero_vec(s)) add(std::move(s), {top});
        if (!is_zero_vec(d)) add(std::move(d), {top});
      }
    }
  } else if (L.rank() >= 3) {
    for (int z : L.layer(3)) {
      const auto& lows = L.flat(static_cast<std::size_t>(z)).lower;
      for (std::size_t i = 0; i < lows.size(); ++i) {
        for (std::size_t j = i + 1; j < lows.size(); ++j) {
          const int x = lows[i], y = lows[j];
          if (L.flat(static_cast<std::size_t>(x)).members.intersects(L.flat(static_cast<std::size_t>(y)).members)) continue;
          std::vector<Vec> rows = L.points(static_cast<std::size_t>(x));
          const auto& py = L.points(static_cast<std::size_t>(y));
          rows.insert(rows.end(), py.begin(), py.end());
          Matrix k = kernel(Matrix::from_rows(p.field(), p.dim(), rows));
          if (k.rows() != 1) continue;
          add(k.row(0), {x, y});
        }
      }
    }
  }
  for (auto& [key, v] : found) out.candidates.push_back({v.first, std::vector<int>(v.second.begin(), v.second.end())});
  return out;
}

CandidateSet enumerate_candidates(const Arrangement& a) { return enumerate_candidates(*Pool::make(a)); }

Obstruction addition_obstruction(const Arrangement& a, const Exponents& exps, const Hyperplane& h) {
  if (a.contains(h)) throw InvalidArgument("hyperplane " + h.key() + " already in the arrangement");
  const Lattice L = Lattice::build(a, 2);
  Obstruction o;
  if (L.rank() >= 2) {
    for (int x : L.layer(2)) {
      const auto& pts = L.points(static_cast<std::size_t>(x));
      if (std::all_of(pts.begin(), pts.end(), [&](const Vec& v) { return h.contains(v); })) {
        o.sum += static_cast<std::int64_t>(L.flat(static_cast<std::size_t>(x)).members.count()) - 1;
        ++o.flats;
      }
    }
  }
  o.passes = std::find(exps.begin(), exps.end(), o.sum) != exps.end() && !(o.sum == 1 && a.is_irreducible());
  return o;
}

namespace {

struct Job {
  CandidateOutcome out;
  int atom = -1;
  std::vector<int> sizes{};
};

std::string fingerprint(const Job& j) {
  std::vector<int> s = j.sizes;
  std::sort(s.begin(), s.end());
  std::string k = "flats";
  for (int x : s) k += " " + std::to_string(x);
  return k + "; chi " + (j.out.chi ? j.out.chi->str() : "?");
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SweepReport no_free_addition(const Pool& p, const IndexSet& b, const Exponents& e, SweepOptions opts,
                             const CandidateSet* cands) {
  SweepReport rep;
  rep.size = b.count();
  rep.exponents = e;
  rep.irreducible = p.is_irreducible(b);
  CandidateSet own;
  if (!cands) {
    own = enumerate_candidates(p);
    cands = &own;
  }
  rep.note = cands->note;
  const Lattice& L = p.lattice();
  if (L.rank() >= 2) {
    for (int x : L.layer(2)) {
      const auto c = static_cast<std::int64_t>(L.flat(static_cast<std::size_t>(x)).members.count_and(b));
      if (c >= 2) rep.max_single_flat = std::max(rep.max_single_flat, c - 1);
    }
  }
  rep.min_admissible = std::numeric_limits<std::int64_t>::max();
  for (auto x : e) {
    if (!(x == 1 && rep.irreducible)) rep.min_admissible = std::min(rep.min_admissible, x);
  }
  rep.complete = cands->complete && rep.max_single_flat < rep.min_admissible;

  auto passes = [&](std::int64_t s) {
    return std::find(e.begin(), e.end(), s) != e.end() && !(s == 1 && rep.irreducible);
  };
  std::vector<Job> jobs;
  for (const auto& c : cands->candidates) {
    Job j{CandidateOutcome{c.hyperplane}};
    for (int x : c.flats) {
      const auto k = static_cast<int>(L.flat(static_cast<std::size_t>(x)).members.count_and(b));
      if (k >= 2) j.sizes.push_back(k);
    }
    if (j.sizes.size() < 2 && cands->complete) continue;
    j.out.flats = j.sizes.size();
    for (int k : j.sizes) j.out.sum += k - 1;
    ++rep.external_candidates;
    ++rep.histogram[j.out.sum];
    jobs.push_back(std::move(j));
  }
  const IndexSet outside = p.all() - b;
  outside.for_each([&](int h) {
    Job j{CandidateOutcome{p.atom(static_cast<std::size_t>(h)), true}, h};
    for (int x : L.flat(static_cast<std::size_t>(L.atom_flat(h))).upper) {
      const auto k = static_cast<int>(L.flat(static_cast<std::size_t>(x)).members.count_and(b));
      if (k >= 2) j.sizes.push_back(k);
    }
    j.out.flats = j.sizes.size();
    for (int k : j.sizes) j.out.sum += k - 1;
    ++rep.internal_candidates;
    jobs.push_back(std::move(j));
  });

  const Poly chi_b = p.charpoly(b);
  const Arrangement arr_b = p.arrangement(b);
  parallel_for(jobs.size(), opts.threads, [&](std::size_t i) {
    Job& j = jobs[i];
    const bool ok = passes(j.out.sum);
    if (!ok) j.out.stage = "obstruction";
    if (!ok && (j.out.internal || !opts.all_charpolys)) return;
    if (j.atom >= 0) {
      IndexSet bb = b;
      bb.set(static_cast<std::size_t>(j.atom));
      j.out.chi = p.charpoly(bb);
    } else {
      const Arrangement plus = arr_b.with(j.out.hyperplane);
      j.out.chi = chi_b - Lattice::build(plus.restrict_to(j.out.hyperplane)).charpoly();
    }
    auto roots = exponents_from_charpoly(*j.out.chi, rep.size + 1);
    if (!ok) return;
    if (!roots) {
      j.out.stage = "charpoly";
      return;
    }
    auto forced = exponents_replace(e, j.out.sum, j.out.sum + 1);
    j.out.stage = forced && *forced == *roots ? "survivor" : "exponents";
  });

  for (const Job& j : jobs) {
    if (j.out.internal) {
      if (j.out.stage == "survivor") rep.internal_survivors.push_back(j.out);
      continue;
    }
    ++rep.stage_counts[j.out.stage];
    if (j.out.chi) {
      ++rep.charpolys_computed;
      ++rep.fingerprint_classes[fingerprint(j)];
      if (exponents_from_charpoly(*j.out.chi, rep.size + 1)) ++rep.splitting_charpolys[j.out.chi->str()];
    }
    if (j.out.stage == "survivor") rep.survivors.push_back(j.out);
  }
  return rep;
}

SweepReport no_free_addition(const Arrangement& a, const Exponents& e, SweepOptions opts) {
  auto p = Pool::make(a);
  return no_free_addition(*p, p->all(), e, opts);
}

bool condition_star(const Pool& p, const IndexSet& n) {
  const Lattice& L = p.lattice();
  if (L.rank() < 2) return true;
  for (int x : L.layer(2)) {
    const IndexSet& m = L.flat(static_cast<std::size_t>(x)).members;
    if (m.count_and(n) >= 2 && (m - n).empty()) return false;
  }
  return true;
}

bool condition_star(const Arrangement& a, const std::vector<Hyperplane>& n) {
  IndexSet s;
  for (const auto& h : n) {
    auto i = a.index_of(h);
    if (!i) throw InvalidArgument("hyperplane " + h.key() + " is not in the arrangement");
    s.set(*i);
  }
  const Lattice L = Lattice::build(a, 2);
  if (L.rank() < 2) return true;
  for (int x : L.layer(2)) {
    const IndexSet& m = L.flat(static_cast<std::size_t>(x)).members;
    if (m.count_and(s) >= 2 && (m - s).empty()) return false;
  }
  return true;
}

}  // namespace hyperarr
