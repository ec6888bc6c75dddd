#include "hyperarr/pool.hpp"

#include <algorithm>

#include "hyperarr/errors.hpp"

namespace hyperarr {

std::shared_ptr<Pool> Pool::make(const Arrangement& a, std::size_t flat_budget) {
  std::shared_ptr<Pool> p(new Pool());
  p->field_ = a.field();
  p->lattice_ = Lattice::build(a, std::nullopt, flat_budget);
  if (!p->lattice_.complete()) throw BudgetExceeded("lattice of " + a.name() + " is incomplete");
  p->lattice_.down(0);  // materialize lazy tables before any concurrent use
  p->atoms_ = a.hyperplanes();
  for (std::size_t i = 0; i < p->atoms_.size(); ++i) p->atom_index_.emplace(p->atoms_[i].key(), i);
  return p;
}

std::optional<std::size_t> Pool::index_of(const Hyperplane& h) const {
  auto it = atom_index_.find(h.key());
  if (it == atom_index_.end()) return std::nullopt;
  return it->second;
}

Arrangement Pool::arrangement(const IndexSet& b) const {
  std::vector<Hyperplane> hs;
  b.for_each([&](int i) { hs.push_back(atoms_[static_cast<std::size_t>(i)]); });
  return Arrangement(field_, dim(), std::move(hs));
}

ArrKey Pool::key(const IndexSet& b) const { return arrangement(b).key(); }

SubLattice Pool::sub(const IndexSet& b) const {
  SubLattice s;
  s.members = b;
  s.is_flat.assign(lattice_.size(), 0);
  s.is_flat[0] = 1;
  for (std::size_t x = 1; x < lattice_.size(); ++x) {
    const Flat& f = lattice_.flat(x);
    const IndexSet m = f.members & b;
    if (m.empty()) continue;
    bool closed = true;
    for (int lo : f.lower) {
      if (m.subset_of(lattice_.flat(static_cast<std::size_t>(lo)).members)) {
        closed = false;
        break;
      }
    }
    if (closed) {
      s.is_flat[x] = 1;
      s.rank = std::max(s.rank, f.rank);
    }
  }
  return s;
}

Poly Pool::charpoly(const IndexSet& b) const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = chi_cache_.find(b);
    if (it != chi_cache_.end()) return it->second;
  }
  const SubLattice s = sub(b);
  // Flats are stored rank by rank, so one forward pass sees every lower flat first.
  std::vector<std::int64_t> mu(lattice_.size(), 0);
  std::vector<std::int64_t> c(dim() + 1, 0);
  mu[0] = 1;
  c[dim()] = 1;
  for (std::size_t x = 1; x < lattice_.size(); ++x) {
    if (!s.is_flat[x]) continue;
    std::int64_t acc = 1;
    for (int z : lattice_.down(x)) {
      if (s.is_flat[static_cast<std::size_t>(z)]) acc += mu[static_cast<std::size_t>(z)];
    }
    mu[x] = -acc;
    c[dim() - static_cast<std::size_t>(lattice_.flat(x).rank)] += mu[x];
  }
  Poly p(std::move(c));
  std::lock_guard<std::mutex> lk(mu_);
  chi_cache_.emplace(b, p);
  return p;
}

Poly Pool::charpoly_above(const SubLattice& s, int x) const {
  if (!s.is_flat[static_cast<std::size_t>(x)]) throw InvalidArgument("flat is not a flat of the subarrangement");
  const IndexSet& mx = lattice_.flat(static_cast<std::size_t>(x)).members;
  std::vector<int> above;
  for (std::size_t y = 0; y < lattice_.size(); ++y) {
    if (s.is_flat[y] && mx.subset_of(lattice_.flat(y).members)) above.push_back(static_cast<int>(y));
  }
  std::unordered_map<int, std::int64_t> mu;
  const std::size_t d = dim() - static_cast<std::size_t>(lattice_.flat(static_cast<std::size_t>(x)).rank);
  std::vector<std::int64_t> c(d + 1, 0);
  for (int y : above) {
    std::int64_t v = 1;
    if (y != x) {
      v = 0;
      for (int z : above) {
        if (z == y) break;
        if (lattice_.leq(z, y)) v -= mu[z];
      }
    }
    mu[y] = v;
    c[d - static_cast<std::size_t>(lattice_.flat(static_cast<std::size_t>(y)).rank -
                                   lattice_.flat(static_cast<std::size_t>(x)).rank)] += v;
  }
  return Poly(std::move(c));
}

std::size_t Pool::restriction_size(const IndexSet& b, int h) const {
  std::size_t n = 0;
  for (int z : lattice_.flat(static_cast<std::size_t>(lattice_.atom_flat(h))).upper) {
    if (lattice_.flat(static_cast<std::size_t>(z)).members.count_and(b) >= 2) ++n;
  }
  return n;
}

IndexSet Pool::restriction_atoms(const IndexSet& b, int h) const {
  IndexSet s;
  const auto& up = lattice_.flat(static_cast<std::size_t>(lattice_.atom_flat(h))).upper;
  for (std::size_t i = 0; i < up.size(); ++i) {
    if (lattice_.flat(static_cast<std::size_t>(up[i])).members.count_and(b) >= 2) s.set(i);
  }
  return s;
}

int Pool::child_atom_flat(int h, int i) const {
  return lattice_.flat(static_cast<std::size_t>(lattice_.atom_flat(h))).upper[static_cast<std::size_t>(i)];
}

std::shared_ptr<const Pool> Pool::child(int h) const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = children_.find(h);
    if (it != children_.end()) return it->second;
  }
  std::shared_ptr<Pool> c(new Pool());
  c->field_ = field_;
  const int fx = lattice_.atom_flat(h);
  c->lattice_ = lattice_.interval(fx);
  c->lattice_.down(0);
  const std::vector<Vec> basis = hyperplane_basis(atoms_[static_cast<std::size_t>(h)]);
  for (int z : lattice_.flat(static_cast<std::size_t>(fx)).upper) {
    IndexSet others = lattice_.flat(static_cast<std::size_t>(z)).members;
    others.reset(static_cast<std::size_t>(h));
    const Vec& alpha = atoms_[others.first()].covector();
    Vec t;
    t.reserve(basis.size());
    for (const Vec& v : basis) t.push_back(dot(alpha, v));
    c->atoms_.emplace_back(std::move(t));
  }
  for (std::size_t i = 0; i < c->atoms_.size(); ++i) c->atom_index_.emplace(c->atoms_[i].key(), i);
  std::lock_guard<std::mutex> lk(mu_);
  return children_.emplace(h, std::move(c)).first->second;
}

bool Pool::is_irreducible(const IndexSet& b) const { return arrangement(b).is_irreducible(); }

}  // namespace hyperarr
