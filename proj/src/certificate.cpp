#include "hyperarr/certificate.hpp"

#include <algorithm>
#include <numeric>

#include "hyperarr/errors.hpp"
#include "hyperarr/lattice.hpp"

namespace hyperarr {

std::string to_string(Status s) {
  switch (s) {
    case Status::Free:
      return "free";
    case Status::NonFree:
      return "nonfree";
    case Status::Unknown:
      break;
  }
  return "unknown";
}

std::string exponents_str(const Exponents& e) {
  std::string s = "{{";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e[i]);
  }
  return s + "}}";
}

std::optional<Exponents> exponents_from_charpoly(const Poly& chi, std::size_t n_hyperplanes) {
  return chi.integer_roots(static_cast<std::int64_t>(n_hyperplanes));
}

bool multiset_contains(const Exponents& super, const Exponents& sub, Exponents* rest) {
  Exponents a = super, b = sub, r;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (!std::includes(a.begin(), a.end(), b.begin(), b.end())) return false;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  if (rest) *rest = std::move(r);
  return true;
}

Exponents pad_exponents(Exponents e, std::size_t dim) {
  while (e.size() < dim) e.push_back(0);
  std::sort(e.begin(), e.end());
  return e;
}

std::optional<Exponents> exponents_replace(const Exponents& e, std::int64_t from, std::int64_t to) {
  Exponents r = e;
  auto it = std::find(r.begin(), r.end(), from);
  if (it == r.end()) return std::nullopt;
  *it = to;
  std::sort(r.begin(), r.end());
  return r;
}

namespace {

Status status_from(const std::string& s) {
  if (s == "free") return Status::Free;
  if (s == "nonfree") return Status::NonFree;
  if (s == "unknown") return Status::Unknown;
  throw ParseError("unknown certificate status '" + s + "'", 0);
}

nlohmann::json hyperplane_json(const Hyperplane& h) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : h.covector()) a.push_back(x.str());
  return a;
}

Hyperplane hyperplane_from(const nlohmann::json& j, CyclotomicField f) {
  if (!j.is_array() || j.empty()) throw ParseError("hyperplane must be a nonempty array of scalars", 0);
  std::vector<std::string> coords;
  for (const auto& x : j) coords.push_back(x.get<std::string>());
  return Hyperplane::parse(f, coords);
}

}  // namespace

nlohmann::json cert_to_json(const Certificate& c) {
  nlohmann::json j;
  j["rule"] = c.rule;
  j["status"] = to_string(c.status);
  if (c.status == Status::Free) j["exponents"] = c.exponents;
  if (c.hyperplane) j["hyperplane"] = hyperplane_json(*c.hyperplane);
  if (!c.direction.empty()) j["direction"] = c.direction;
  if (!c.key.empty()) j["key"] = c.key;
  if (!c.source.empty()) j["source"] = c.source;
  if (!c.reason.empty()) j["reason"] = c.reason;
  if (!c.heuristic.empty()) j["heuristic"] = c.heuristic;
  if (c.value != 0) j["value"] = c.value;
  if (!c.children.empty()) {
    j["children"] = nlohmann::json::array();
    for (const auto& ch : c.children) j["children"].push_back(cert_to_json(*ch));
  }
  if (!c.chain.empty()) {
    j["chain"] = nlohmann::json::array();
    for (const auto& flat : c.chain) {
      nlohmann::json f = nlohmann::json::array();
      for (const auto& h : flat) f.push_back(hyperplane_json(h));
      j["chain"].push_back(std::move(f));
    }
  }
  return j;
}

CertPtr cert_from_json(const nlohmann::json& j, CyclotomicField f) {
  try {
    auto c = std::make_shared<Certificate>();
    c->rule = j.at("rule").get<std::string>();
    c->status = status_from(j.at("status").get<std::string>());
    if (j.contains("exponents")) c->exponents = j["exponents"].get<Exponents>();
    if (j.contains("hyperplane")) c->hyperplane = hyperplane_from(j["hyperplane"], f);
    c->direction = j.value("direction", "");
    c->key = j.value("key", "");
    c->source = j.value("source", "");
    c->reason = j.value("reason", "");
    c->heuristic = j.value("heuristic", "");
    c->value = j.value("value", std::int64_t{0});
    if (j.contains("children")) {
      for (const auto& ch : j["children"]) c->children.push_back(cert_from_json(ch, f));
    }
    if (j.contains("chain")) {
      for (const auto& flat : j["chain"]) {
        std::vector<Hyperplane> hs;
        for (const auto& h : flat) hs.push_back(hyperplane_from(h, f));
        c->chain.push_back(std::move(hs));
      }
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what(), 0);
  }
}

std::size_t cert_size(const Certificate& c) {
  std::size_t n = 1;
  for (const auto& ch : c.children) n += cert_size(*ch);
  return n;
}

std::map<std::string, std::size_t> cert_rules(const Certificate& c) {
  std::map<std::string, std::size_t> m;
  ++m[c.rule];
  for (const auto& ch : c.children) {
    for (const auto& [k, v] : cert_rules(*ch)) m[k] += v;
  }
  return m;
}

bool FactRegistry::insert(const ArrKey& key, Fact fact) {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = facts_.find(key);
  if (it == facts_.end()) {
    facts_.emplace(key, std::move(fact));
    return true;
  }
  const Fact& old = it->second;
  if (old.status != fact.status || (fact.status == Status::Free && old.exponents != fact.exponents)) {
    throw ValidationError("contradictory facts for " + key.text + ": " + to_string(old.status) + " " +
                          exponents_str(old.exponents) + " vs " + to_string(fact.status) + " " +
                          exponents_str(fact.exponents));
  }
  return false;
}

std::optional<Fact> FactRegistry::lookup(const ArrKey& key) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = facts_.find(key);
  if (it == facts_.end()) return std::nullopt;
  return it->second;
}

std::size_t FactRegistry::size() const {
  std::lock_guard<std::mutex> lk(mu_);
  return facts_.size();
}

void FactRegistry::note(const std::string& label, std::vector<Exponents> values) {
  std::lock_guard<std::mutex> lk(mu_);
  notes_[label] = std::move(values);
}

std::map<std::string, std::vector<Exponents>> FactRegistry::notes() const {
  std::lock_guard<std::mutex> lk(mu_);
  return notes_;
}

namespace {

struct Verifier {
  const FactRegistry* facts;

  static Poly charpoly(const Arrangement& a) { return Lattice::build(a).charpoly(); }

  std::optional<std::string> free_child(const Certificate& c, std::size_t i, const Arrangement& a,
                                        const std::string& path, Exponents* exps) const {
    if (c.children.size() <= i) return path + ": missing child " + std::to_string(i);
    const Certificate& ch = *c.children[i];
    if (ch.status != Status::Free) return path + ": child " + std::to_string(i) + " is not free";
    if (auto f = check(a, ch, path + "/" + ch.rule)) return f;
    *exps = ch.exponents;
    return std::nullopt;
  }

  std::optional<std::string> check(const Arrangement& a, const Certificate& c, const std::string& path) const {
    auto fail = [&](const std::string& why) { return std::optional<std::string>(path + ": " + why); };
    const std::size_t n = a.size();
    if (c.status == Status::Free) {
      if (c.exponents.size() != a.dim()) return fail("exponent count differs from the dimension");
      if (!std::is_sorted(c.exponents.begin(), c.exponents.end()) || (!c.exponents.empty() && c.exponents[0] < 0))
        return fail("exponents not a sorted nonnegative multiset");
      if (std::accumulate(c.exponents.begin(), c.exponents.end(), std::int64_t{0}) != static_cast<std::int64_t>(n))
        return fail("exponents do not sum to the number of hyperplanes");
    }
    const bool needs_h = c.rule == "addition" || c.rule == "deletion" || c.rule == "division" ||
                         c.rule == "nonfree_restriction_size" || c.rule == "nonfree_addition_obstruction" ||
                         c.rule == "nonfree_exponent_mismatch" || c.rule == "nonfree_restriction";
    if (needs_h) {
      if (!c.hyperplane) return fail("rule needs a hyperplane");
      if (c.hyperplane->dim() != a.dim() || c.hyperplane->field() != a.field())
        return fail("hyperplane lives in a different space");
    }
    auto expect_status = [&](Status s) -> std::optional<std::string> {
      if (c.status != s) return fail("rule " + c.rule + " cannot conclude " + to_string(c.status));
      return std::nullopt;
    };

    if (c.rule == "base") {
      if (auto f = expect_status(Status::Free)) return f;
      const std::size_t r = a.rank();
      if (r > 2) return fail("base rule on rank " + std::to_string(r));
      Exponents e(a.dim(), 0);
      if (r >= 1) e.back() = r == 1 ? 1 : static_cast<std::int64_t>(n) - 1;
      if (r == 2) e[e.size() - 2] = 1;
      std::sort(e.begin(), e.end());
      if (e != c.exponents) return fail("base exponents should be " + exponents_str(e));
      return std::nullopt;
    }
    if (c.rule == "catalog_fact") {
      if (!facts) return fail("no fact registry to check against");
      const ArrKey own = a.key(), reduced = a.drop_zero_coordinates().key();
      if (c.key != own.text && c.key != reduced.text) return fail("fact key does not match the arrangement");
      auto fact = facts->lookup(ArrKey{c.key});
      if (!fact) return fail("fact not in registry");
      if (fact->status != c.status ||
          (c.status == Status::Free && pad_exponents(fact->exponents, a.dim()) != c.exponents))
        return fail("fact differs from the registry");
      return std::nullopt;
    }
    if (c.rule == "product") {
      if (auto f = expect_status(Status::Free)) return f;
      const auto comps = a.components();
      if (comps.size() < 2) return fail("arrangement is irreducible");
      if (c.children.size() != comps.size()) return fail("one child per component expected");
      Exponents all;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        Exponents e;
        if (auto f = free_child(c, i, a.subarrangement(comps[i]), path, &e)) return f;
        for (auto x : e)
          if (x) all.push_back(x);
      }
      while (all.size() < a.dim()) all.push_back(0);
      std::sort(all.begin(), all.end());
      if (all != c.exponents) return fail("exponents are not the union of the factors'");
      return std::nullopt;
    }
    if (c.rule == "addition" || c.rule == "deletion") {
      if (auto f = expect_status(Status::Free)) return f;
      const bool add = c.rule == "addition";
      if (a.contains(*c.hyperplane) != add) return fail("hyperplane membership does not fit the rule");
      const Arrangement other = add ? a.without(*c.hyperplane) : a.with(*c.hyperplane);
      Exponents e1, e2, rest;
      if (auto f = free_child(c, 0, other, path, &e1)) return f;
      if (auto f = free_child(c, 1, (add ? a : other).restrict_to(*c.hyperplane), path, &e2)) return f;
      if (!multiset_contains(e1, e2, &rest) || rest.size() != 1) return fail("restriction exponents not contained");
      auto expect = exponents_replace(e1, rest[0], rest[0] + (add ? 1 : -1));
      if (!expect || *expect != c.exponents) return fail("exponents do not follow the addition-deletion pattern");
      return std::nullopt;
    }
    if (c.rule == "division") {
      if (auto f = expect_status(Status::Free)) return f;
      if (!a.contains(*c.hyperplane)) return fail("division hyperplane not in the arrangement");
      const Arrangement res = a.restrict_to(*c.hyperplane);
      Exponents e;
      if (auto f = free_child(c, 0, res, path, &e)) return f;
      const Poly chi = charpoly(a);
      if (!chi.divisible_by(charpoly(res))) return fail("restriction polynomial does not divide");
      auto roots = exponents_from_charpoly(chi, n);
      if (!roots || *roots != c.exponents) return fail("exponents are not the roots of chi");
      return std::nullopt;
    }
    if (c.rule == "supersolvable") {
      if (auto f = expect_status(Status::Free)) return f;
      const Lattice L = Lattice::build(a);
      if (c.chain.size() != static_cast<std::size_t>(L.rank()) + 1) return fail("chain length differs from rank");
      Exponents e;
      std::size_t prev = 0;
      for (std::size_t i = 0; i < c.chain.size(); ++i) {
        IndexSet m;
        for (const auto& h : c.chain[i]) {
          auto idx = a.index_of(h);
          if (!idx) return fail("chain hyperplane not in the arrangement");
          m.set(*idx);
        }
        auto x = L.find(m);
        if (!x) return fail("chain element " + std::to_string(i) + " is not a flat");
        if (L.flat(static_cast<std::size_t>(*x)).rank != static_cast<int>(i)) return fail("chain ranks not consecutive");
        if (!L.is_modular(*x)) return fail("chain element " + std::to_string(i) + " is not modular");
        if (i > 0) e.push_back(static_cast<std::int64_t>(m.count() - prev));
        prev = m.count();
      }
      if (prev != n) return fail("chain does not end at the top");
      while (e.size() < a.dim()) e.push_back(0);
      std::sort(e.begin(), e.end());
      if (e != c.exponents) return fail("exponents do not match the chain");
      return std::nullopt;
    }
    if (c.rule == "nonfree_charpoly") {
      if (auto f = expect_status(Status::NonFree)) return f;
      if (exponents_from_charpoly(charpoly(a), n)) return fail("chi splits");
      return std::nullopt;
    }
    if (c.rule == "nonfree_restriction_size" || c.rule == "nonfree_addition_obstruction" ||
        c.rule == "nonfree_exponent_mismatch" || c.rule == "nonfree_restriction") {
      if (auto f = expect_status(Status::NonFree)) return f;
      const bool add = a.contains(*c.hyperplane);
      if (c.rule == "nonfree_restriction_size" && add) return fail("hyperplane must lie outside");
      if (c.rule == "nonfree_addition_obstruction" && !add) return fail("hyperplane must lie inside");
      if (!c.direction.empty() && (c.direction == "addition") != add) return fail("direction does not fit");
      const Arrangement other = add ? a.without(*c.hyperplane) : a.with(*c.hyperplane);
      const Arrangement big = add ? a : other;
      const Arrangement res = big.restrict_to(*c.hyperplane);
      Exponents e;
      if (auto f = free_child(c, 0, other, path, &e)) return f;
      // add: s = |A'| - |A^H|, freeness of A forces s+1 in place of s.
      // del: b = |A u H| - |(A u H)^H|, freeness of A forces b-1 in place of b.
      const std::int64_t s = static_cast<std::int64_t>(big.size()) - static_cast<std::int64_t>(res.size()) - (add ? 1 : 0);
      if (c.rule == "nonfree_restriction_size") {
        if (std::find(e.begin(), e.end(), s) != e.end()) return fail("restriction size is consistent");
        return std::nullopt;
      }
      if (c.rule == "nonfree_addition_obstruction") {
        const bool in = std::find(e.begin(), e.end(), s) != e.end();
        if (in && !(s == 1 && other.is_irreducible())) return fail("obstruction sum passes");
        return std::nullopt;
      }
      if (c.rule == "nonfree_exponent_mismatch") {
        auto forced = exponents_replace(e, s, add ? s + 1 : s - 1);
        if (!forced) return fail("pattern undefined; a different rule applies");
        auto roots = exponents_from_charpoly(charpoly(a), n);
        if (roots && *roots == *forced) return fail("chi agrees with the forced exponents");
        return std::nullopt;
      }
      if (c.children.size() < 2) return fail("missing restriction child");
      const Certificate& rc = *c.children[1];
      if (rc.status != Status::NonFree) return fail("restriction child is not nonfree");
      if (auto f = check(res, rc, path + "/" + rc.rule)) return f;
      return std::nullopt;
    }
    if (c.rule == "unknown") {
      if (auto f = expect_status(Status::Unknown)) return f;
      return std::nullopt;
    }
    return fail("unknown rule '" + c.rule + "'");
  }
};

}  // namespace

VerifyResult cert_verify(const Arrangement& a, const Certificate& c, const FactRegistry* facts) {
  Verifier v{facts};
  VerifyResult r;
  try {
    if (auto f = v.check(a, c, c.rule)) {
      r.ok = false;
      r.failure = *f;
    }
  } catch (const std::exception& e) {
    r.ok = false;
    r.failure = std::string("exception: ") + e.what();
  }
  return r;
}

}  // namespace hyperarr
