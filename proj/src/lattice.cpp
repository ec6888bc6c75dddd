#include "hyperarr/lattice.hpp"

#include <algorithm>
#include <functional>

#include "hyperarr/errors.hpp"

namespace hyperarr {

int Lattice::insert(IndexSet members, int rank) {
  auto [it, fresh] = index_.emplace(members, static_cast<int>(flats_.size()));
  if (!fresh) return it->second;
  Flat f;
  f.members = members;
  f.rank = rank;
  flats_.push_back(std::move(f));
  if (static_cast<int>(by_rank_.size()) <= rank) by_rank_.resize(static_cast<std::size_t>(rank) + 1);
  by_rank_[static_cast<std::size_t>(rank)].push_back(it->second);
  return it->second;
}

void Lattice::link(int lo, int hi) {
  flats_[static_cast<std::size_t>(lo)].upper.push_back(hi);
  flats_[static_cast<std::size_t>(hi)].lower.push_back(lo);
}

Lattice Lattice::build(const Arrangement& a, std::optional<int> max_rank, std::size_t budget) {
  Lattice L;
  L.dim_ = a.dim();
  L.n_atoms_ = a.size();
  const CyclotomicField f = a.field();
  const int target = max_rank ? std::min<int>(*max_rank, static_cast<int>(a.dim())) : static_cast<int>(a.dim());

  L.insert(IndexSet{}, 0);
  std::vector<Vec> basis;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Vec e(a.dim(), f.zero());
    e[i] = f.one();
    basis.push_back(std::move(e));
  }
  L.points_.push_back(std::move(basis));

  for (int r = 0; r < target && r < static_cast<int>(L.by_rank_.size()); ++r) {
    const std::vector<int> layer = L.by_rank_[static_cast<std::size_t>(r)];
    for (int x : layer) {
      IndexSet covered = L.flats_[static_cast<std::size_t>(x)].members;
      for (std::size_t h = 0; h < a.size(); ++h) {
        if (covered.test(h)) continue;
        const std::vector<Vec>& pts = L.points_[static_cast<std::size_t>(x)];
        const Vec& alpha = a[h].covector();
        std::vector<Element> vals;
        vals.reserve(pts.size());
        std::size_t pivot = pts.size();
        for (std::size_t i = 0; i < pts.size(); ++i) {
          vals.push_back(dot(alpha, pts[i]));
          if (pivot == pts.size() && !vals.back().is_zero()) pivot = i;
        }
        std::vector<Vec> next;
        next.reserve(pts.size() - 1);
        const Element pinv = vals[pivot].inverse();
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (i == pivot) continue;
          Vec p = pts[i];
          if (!vals[i].is_zero()) {
            const Element s = vals[i] * pinv;
            for (std::size_t c = 0; c < p.size(); ++c) {
              if (!pts[pivot][c].is_zero()) p[c] -= s * pts[pivot][c];
            }
          }
          next.push_back(std::move(p));
        }
        IndexSet members = L.flats_[static_cast<std::size_t>(x)].members;
        members.set(h);
        for (std::size_t k = 0; k < a.size(); ++k) {
          if (members.test(k)) continue;
          bool on = true;
          for (const Vec& p : next) {
            if (!a[k].contains(p)) {
              on = false;
              break;
            }
          }
          if (on) members.set(k);
        }
        covered |= members;
        const std::size_t before = L.flats_.size();
        const int y = L.insert(members, r + 1);
        if (L.flats_.size() != before) {
          if (L.flats_.size() > budget) {
            throw BudgetExceeded("lattice flat budget of " + std::to_string(budget) + " exceeded");
          }
          L.points_.push_back(std::move(next));
        }
        L.link(x, y);
      }
    }
  }
  {
    const auto& last = L.by_rank_.back();
    L.complete_ = last.size() == 1 && L.flats_[static_cast<std::size_t>(last[0])].members.count() == a.size();
  }
  L.atom_flat_.assign(a.size(), -1);
  if (L.by_rank_.size() > 1) {
    for (int x : L.by_rank_[1]) {
      L.flats_[static_cast<std::size_t>(x)].members.for_each([&](int h) { L.atom_flat_[static_cast<std::size_t>(h)] = x; });
    }
  }
  return L;
}

const std::vector<int>& Lattice::layer(int r) const {
  static const std::vector<int> kEmpty;
  if (r < 0 || r >= static_cast<int>(by_rank_.size())) return kEmpty;
  return by_rank_[static_cast<std::size_t>(r)];
}

std::optional<int> Lattice::find(const IndexSet& members) const {
  auto it = index_.find(members);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Lattice::top() const {
  if (!complete_) throw InvalidArgument("lattice was truncated; no top flat");
  return by_rank_.back().front();
}

const std::vector<int>& Lattice::down(std::size_t i) const {
  if (down_.empty()) {
    down_.resize(flats_.size());
    std::vector<int> stamp(flats_.size(), -1);
    for (const auto& layer : by_rank_) {
      for (int y : layer) {
        auto& d = down_[static_cast<std::size_t>(y)];
        for (int lo : flats_[static_cast<std::size_t>(y)].lower) {
          if (lo == 0) continue;
          if (stamp[static_cast<std::size_t>(lo)] != y) {
            stamp[static_cast<std::size_t>(lo)] = y;
            d.push_back(lo);
          }
          for (int z : down_[static_cast<std::size_t>(lo)]) {
            if (stamp[static_cast<std::size_t>(z)] != y) {
              stamp[static_cast<std::size_t>(z)] = y;
              d.push_back(z);
            }
          }
        }
      }
    }
  }
  return down_[i];
}

const std::vector<std::int64_t>& Lattice::mobius() const {
  if (!complete_) throw InvalidArgument("mobius function needs the complete lattice");
  if (mobius_.empty()) {
    mobius_.assign(flats_.size(), 0);
    mobius_[0] = 1;
    for (std::size_t r = 1; r < by_rank_.size(); ++r) {
      for (int y : by_rank_[r]) {
        std::int64_t s = 1;
        for (int z : down(static_cast<std::size_t>(y))) s += mobius_[static_cast<std::size_t>(z)];
        mobius_[static_cast<std::size_t>(y)] = -s;
      }
    }
  }
  return mobius_;
}

Poly Lattice::charpoly() const {
  const auto& mu = mobius();
  std::vector<std::int64_t> c(dim_ + 1, 0);
  for (std::size_t i = 0; i < flats_.size(); ++i) c[dim_ - static_cast<std::size_t>(flats_[i].rank)] += mu[i];
  return Poly(std::move(c));
}

std::map<int, int> Lattice::rank2_profile() const {
  std::map<int, int> prof;
  for (int x : layer(2)) ++prof[static_cast<int>(flats_[static_cast<std::size_t>(x)].members.count())];
  return prof;
}

int Lattice::closure_join(int x, int y) const {
  int cur = x;
  const IndexSet& target = flats_[static_cast<std::size_t>(y)].members;
  while (!target.subset_of(flats_[static_cast<std::size_t>(cur)].members)) {
    const IndexSet missing = target - flats_[static_cast<std::size_t>(cur)].members;
    const int h = static_cast<int>(missing.first());
    int next = -1;
    for (int u : flats_[static_cast<std::size_t>(cur)].upper) {
      if (flats_[static_cast<std::size_t>(u)].members.test(static_cast<std::size_t>(h))) {
        next = u;
        break;
      }
    }
    if (next < 0) throw InvalidArgument("closure leaves the built part of the lattice");
    cur = next;
  }
  return cur;
}

std::optional<int> Lattice::flat_join(int x, int y) const {
  const auto meet = find(flats_[static_cast<std::size_t>(x)].members & flats_[static_cast<std::size_t>(y)].members);
  if (!meet) throw std::logic_error("intersection of flats is not a flat");
  const int j = closure_join(x, y);
  const int lhs = flats_[static_cast<std::size_t>(x)].rank + flats_[static_cast<std::size_t>(y)].rank;
  const int rhs = flats_[static_cast<std::size_t>(j)].rank + flats_[static_cast<std::size_t>(*meet)].rank;
  if (lhs == rhs) return *meet;
  return std::nullopt;
}

bool Lattice::is_modular(int x) const {
  auto it = modular_cache_.find(x);
  if (it != modular_cache_.end()) return it->second;
  bool ok = true;
  for (std::size_t y = 0; y < flats_.size() && ok; ++y) ok = flat_join(x, static_cast<int>(y)).has_value();
  modular_cache_[x] = ok;
  return ok;
}

std::optional<std::vector<int>> Lattice::supersolvable_chain(std::size_t node_budget) const {
  const int t = top();
  std::size_t nodes = 0;
  std::vector<int> chain{t};
  std::function<bool(int)> descend = [&](int cur) -> bool {
    if (++nodes > node_budget) throw BudgetExceeded("supersolvability search budget exceeded");
    if (flats_[static_cast<std::size_t>(cur)].rank <= 1) return true;
    for (int lo : flats_[static_cast<std::size_t>(cur)].lower) {
      if (flats_[static_cast<std::size_t>(lo)].rank > 1 && !is_modular(lo)) continue;
      chain.push_back(lo);
      if (descend(lo)) return true;
      chain.pop_back();
    }
    return false;
  };
  if (!descend(t)) return std::nullopt;
  if (flats_[static_cast<std::size_t>(chain.back())].rank == 1) chain.push_back(0);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

Lattice Lattice::interval(int x) const {
  if (!complete_) throw InvalidArgument("interval needs the complete lattice");
  const Flat& fx = flats_[static_cast<std::size_t>(x)];
  Lattice L;
  L.dim_ = dim_ - static_cast<std::size_t>(fx.rank);
  L.n_atoms_ = fx.upper.size();
  L.complete_ = true;
  std::unordered_map<int, int> local;
  local[x] = L.insert(IndexSet{}, 0);
  std::vector<int> frontier{x};
  for (int r = fx.rank; !frontier.empty(); ++r) {
    std::vector<int> next;
    for (int y : frontier) {
      for (int u : flats_[static_cast<std::size_t>(y)].upper) {
        if (!local.count(u)) {
          IndexSet m;
          const IndexSet& mu = flats_[static_cast<std::size_t>(u)].members;
          for (std::size_t i = 0; i < fx.upper.size(); ++i) {
            if (flats_[static_cast<std::size_t>(fx.upper[i])].members.subset_of(mu)) m.set(i);
          }
          local[u] = L.insert(m, r + 1 - fx.rank);
          next.push_back(u);
        }
        L.link(local[y], local[u]);
      }
    }
    frontier = std::move(next);
  }
  L.atom_flat_.resize(L.n_atoms_);
  for (std::size_t i = 0; i < fx.upper.size(); ++i) L.atom_flat_[i] = local[fx.upper[i]];
  return L;
}

Arrangement localization(const Arrangement& a, const Lattice& l, int x) {
  if (l.atoms() != a.size()) throw InvalidArgument("lattice does not belong to the arrangement");
  return a.subarrangement(l.flat(static_cast<std::size_t>(x)).members);
}

std::string profile_str(const std::map<int, int>& profile) {
  std::string s;
  for (auto [k, m] : profile) s += (s.empty() ? "" : " ") + std::to_string(k) + "^" + std::to_string(m);
  return s;
}

}  // namespace hyperarr
