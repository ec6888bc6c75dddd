#include "hyperarr/catalog.hpp"

#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <set>

#include "hyperarr/errors.hpp"
#include "hyperarr/lattice.hpp"

#ifndef HYPERARR_DATA_DIR
#define HYPERARR_DATA_DIR "data"
#endif

namespace hyperarr::catalog {
namespace {

Vec unit(CyclotomicField f, std::size_t l, std::size_t i) {
  Vec v(l, f.zero());
  v[i] = f.one();
  return v;
}

void expect(bool ok, const std::string& entry, const std::string& what) {
  if (!ok) throw ValidationError("catalog entry '" + entry + "' failed validation: " + what);
}

void expect_charpoly(const Arrangement& a, const std::string& entry, const std::vector<std::int64_t>& exps) {
  const Poly chi = Lattice::build(a).charpoly();
  const Poly want = Poly::from_roots(exps);
  expect(chi == want, entry, "characteristic polynomial " + chi.str() + " != " + want.str());
}

}  // namespace

Arrangement boolean(std::size_t l) {
  auto f = CyclotomicField::make(1);
  std::vector<Vec> cov;
  for (std::size_t i = 0; i < l; ++i) cov.push_back(unit(f, l, i));
  return Arrangement::from_covectors(f, l, cov, "boolean" + std::to_string(l));
}

Arrangement monomial(int r, int l, int k) {
  if (r < 2 || l < 2 || k < 0 || k > l) throw InvalidArgument("monomial arrangement needs r >= 2, l >= 2, 0 <= k <= l");
  auto f = CyclotomicField::make(r);
  const auto L = static_cast<std::size_t>(l);
  std::vector<Vec> cov;
  for (int i = 0; i < k; ++i) cov.push_back(unit(f, L, static_cast<std::size_t>(i)));
  const Element z = f.zeta();
  for (int i = 0; i < l; ++i) {
    for (int j = i + 1; j < l; ++j) {
      for (int n = 0; n < r; ++n) {
        Vec v(L, f.zero());
        v[static_cast<std::size_t>(i)] = f.one();
        v[static_cast<std::size_t>(j)] = -z.pow(n);
        cov.push_back(std::move(v));
      }
    }
  }
  return Arrangement::from_covectors(
      f, L, cov, "monomial(" + std::to_string(r) + "," + std::to_string(l) + "," + std::to_string(k) + ")");
}

std::vector<Hyperplane> coordinate_hyperplanes(int r, int l) {
  auto f = CyclotomicField::make(r);
  std::vector<Hyperplane> out;
  for (int i = 0; i < l; ++i) out.emplace_back(unit(f, static_cast<std::size_t>(l), static_cast<std::size_t>(i)));
  return out;
}

Element omega7() {
  auto f = CyclotomicField::make(7);
  const Element s = f.parse("z+z^2-z^3+z^4-z^5-z^6");
  if (s * s != f.from_int(-7)) throw std::logic_error("Gauss sum does not square to -7");
  return -(f.one() + s) * Rational(1, 2);
}

Arrangement g24() {
  auto f = CyclotomicField::make(7);
  const Element w = omega7(), one = f.one(), zero = f.zero(), two = f.from_int(2);
  std::vector<Vec> cov = {
      {one, zero, zero},  {zero, one, zero}, {zero, zero, one}, {one, one, zero},   {-one, one, zero},
      {one, zero, one},   {-one, zero, one}, {zero, one, one},  {zero, -one, one},  {w, w, two},
      {-w, w, two},       {w, -w, two},      {-w, -w, two},     {w, two, w},        {-w, two, w},
      {w, two, -w},       {-w, two, -w},     {two, w, w},       {two, -w, w},       {two, w, -w},
      {two, -w, -w},
  };
  return Arrangement::from_covectors(f, 3, cov, "g24");
}

std::vector<Hyperplane> g24_resolution() {
  auto f = CyclotomicField::make(7);
  const Element w = omega7(), w2 = w * w, zero = f.zero(), two = f.from_int(2);
  std::vector<Vec> cov = {
      {w2, w, zero},       {-w2, w, zero},       {w, w2, zero},     {-w, w2, zero},
      {two - w, w, zero},  {w - two, w, zero},   {w, two - w, zero}, {-w, two - w, zero},
      {w, two, zero},      {-w, two, zero},      {two, w, zero},    {-two, w, zero},
  };
  std::vector<Hyperplane> out;
  for (auto& v : cov) out.emplace_back(std::move(v));
  return out;
}

Arrangement g24_resolved() {
  Arrangement a = g24();
  for (const auto& h : g24_resolution()) a = a.with(h);
  return a.renamed("g24_resolved");
}

Arrangement g31() {
  auto f = CyclotomicField::make(4);
  const Element i = f.zeta();
  std::vector<Vec> cov;
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = p + 1; q < 4; ++q)
      for (int k = 0; k < 4; ++k) {
        Vec v(4, f.zero());
        v[p] = f.one();
        v[q] = -i.pow(k);
        cov.push_back(std::move(v));
      }
  // Orbits of (1,1,1,1) and (-1,1,1,1) under G(4,4,4): powers of i with a fixed exponent sum mod 4.
  auto orbit = [&](int residue) {
    std::set<std::string> seen;
    std::vector<Vec> out;
    for (int a0 = 0; a0 < 4; ++a0)
      for (int a1 = 0; a1 < 4; ++a1)
        for (int a2 = 0; a2 < 4; ++a2)
          for (int a3 = 0; a3 < 4; ++a3) {
            if ((a0 + a1 + a2 + a3) % 4 != residue) continue;
            Hyperplane h(Vec{i.pow(a0), i.pow(a1), i.pow(a2), i.pow(a3)});
            if (seen.insert(h.key()).second) out.push_back(h.covector());
          }
    return out;
  };
  for (auto& v : orbit(0)) cov.push_back(std::move(v));
  for (std::size_t p = 0; p < 4; ++p) cov.push_back(unit(f, 4, p));
  for (auto& v : orbit(2)) cov.push_back(std::move(v));
  return Arrangement::from_covectors(f, 4, cov, "g31");
}

Arrangement g29() {
  Arrangement a = g31();
  return a.subarrangement(IndexSet::range(40)).renamed("g29");
}

RestrictionCase g33_a1() {
  auto f = CyclotomicField::make(3);
  const std::vector<std::vector<std::string>> rows = {
      {"1", "0", "0", "0"},         {"1", "1", "0", "0"},           {"1", "1", "1", "0"},
      {"1", "1", "1", "1"},         {"0", "1", "0", "0"},           {"0", "1", "1", "0"},
      {"0", "1", "1", "1"},         {"0", "0", "1", "0"},           {"0", "0", "1", "1"},
      {"0", "0", "0", "1"},         {"z^2", "0", "-1", "z^2"},      {"1", "0", "-1", "z^2"},
      {"2z", "2z+z^2", "z", "-z^2"}, {"-1", "z+2z^2", "z^2", "-1"}, {"z", "0", "-1", "z^2"},
      {"2", "-2z-z^2", "1", "-z^2"}, {"z", "z-z^2", "2z", "z"},      {"z^2", "z^2-1", "-1", "z^2"},
      {"z^2", "-z+z^2", "2z^2", "z^2"}, {"z^2", "0", "-z", "z^2"},  {"z^2", "0", "-z^2", "1"},
      {"z^2", "0", "-1", "z"},      {"2z", "z-z^2", "-2z^2", "-z^2"}, {"z", "2z+z^2", "-1", "z^2"},
      {"-2z^2", "z-z^2", "2z", "z"}, {"-1", "2z+z^2", "z", "-z^2"},  {"2z", "z-z^2", "z", "-z^2"},
      {"2z", "2z+z^2", "z", "-1"},
  };
  // Entry 18 has z^2-1 in its second slot; z-2z^2 there would break freeness of the list.
  std::vector<Hyperplane> hs;
  for (const auto& r : rows) hs.push_back(Hyperplane::parse(f, r));
  RestrictionCase rc{Arrangement(f, 4, std::move(hs), "g33_a1"), {4, 5, 6, 12, 24, 27}, {}};
  rc.additions.push_back(Hyperplane::parse(f, {"-2z-3z^2", "3", "2", "1"}));
  rc.additions.push_back(Hyperplane::parse(f, {"z", "0", "2", "1"}));
  return rc;
}

Arrangement g34_model() {
  auto f = CyclotomicField::make(3);
  const Element w = f.zeta();
  const Element theta = w - w * w;  // sqrt(-3)
  std::vector<Element> units;
  for (int s : {1, -1})
    for (int b = 0; b < 3; ++b) units.push_back(w.pow(b) * Rational(s));
  std::set<std::string> seen;
  std::vector<Hyperplane> hs;
  auto add = [&](Vec v) {
    Hyperplane h(std::move(v));
    if (seen.insert(h.key()).second) hs.push_back(std::move(h));
  };
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j)
      for (const Element& u : units)
        for (int a = 0; a < 3; ++a) {
          Vec v(6, f.zero());
          v[i] = theta * u;
          v[j] = -(theta * u * w.pow(a));
          add(std::move(v));
        }
  for (int code = 0; code < 729; ++code) {
    int c = code, sum = 0;
    Vec v;
    for (int k = 0; k < 6; ++k) {
      sum += c % 3;
      v.push_back(w.pow(c % 3));
      c /= 3;
    }
    if (sum % 3 == 0) add(std::move(v));
  }
  return Arrangement(f, 6, std::move(hs), "g34");
}

std::string data_dir() {
  if (const char* env = std::getenv("HYPERARR_DATA")) return env;
  return HYPERARR_DATA_DIR;
}

Arrangement g33_from_g34(const Arrangement& a, std::string* failure) {
  const CyclotomicField f = a.field();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (const Vec& p : {a[i].covector(), [&] {
           Vec c;
           for (const auto& e : a[i].covector()) c.push_back(e.conj());
           return c;
         }()}) {
      IndexSet on;
      for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].contains(p)) on.set(k);
      if (on.count() != 45) continue;
      Arrangement loc = a.subarrangement(on);
      if (loc.rank() != 5) continue;
      return loc.essentialize().renamed("g33");
    }
  }
  (void)f;
  if (failure) *failure = "no point of the model lies on exactly 45 hyperplanes spanning rank 5";
  throw ValidationError("G34 data gate: no rank-5 flat with 45 hyperplanes found");
}

namespace {

struct GateResult {
  GateReport report;
  std::optional<Arrangement> g34;
  std::optional<Arrangement> g33;
};

// The stated G33 facts, checked on a candidate rank-5 model.
void check_g33(const Arrangement& loc, std::vector<std::string>& checks) {
  checks.push_back("|A_X| = " + std::to_string(loc.size()) + ", rank " + std::to_string(loc.rank()) +
                   " (expected 45, rank 5)");
  if (loc.size() != 45 || loc.rank() != 5) throw ValidationError("G33 model is not 45 hyperplanes of rank 5");
  Lattice L = Lattice::build(loc);
  const auto prof = L.rank2_profile();
  checks.push_back("rank-2 profile of A_X: " + profile_str(prof) + " (expected 2^270 3^240)");
  if (prof != std::map<int, int>{{2, 270}, {3, 240}}) throw ValidationError("G33 rank-2 profile mismatch");
  const Poly chi = L.charpoly();
  checks.push_back("chi(A_X) = " + chi.str() + " (expected (t-1)(t-7)(t-9)(t-13)(t-15))");
  if (chi != Poly::from_roots({1, 7, 9, 13, 15})) throw ValidationError("G33 characteristic polynomial mismatch");
}

const GateResult& gate() {
  static std::once_flag once;
  static GateResult result;
  std::call_once(once, [] {
    GateReport& r = result.report;
    const std::string path = data_dir() + "/g34.arr";
    r.source = path;
    try {
      if (!std::filesystem::exists(path)) throw ValidationError("missing data file " + path);
      Arrangement a = arr_read_file(path).renamed("g34");
      r.checks.push_back("|A(G34)| = " + std::to_string(a.size()) + " (expected 126)");
      if (a.size() != 126) throw ValidationError("G34 data has " + std::to_string(a.size()) + " hyperplanes");
      r.checks.push_back("rank A(G34) = " + std::to_string(a.rank()) + " (expected 6)");
      if (a.rank() != 6) throw ValidationError("G34 data is not of rank 6");
      Arrangement loc = g33_from_g34(a);
      r.checks.push_back("rank-5 flat X with |A_X| = 45 found");
      check_g33(loc, r.checks);
      result.g34 = std::move(a);
      result.g33 = std::move(loc);
      r.passed = true;
      return;
    } catch (const std::exception& e) {
      r.failure = e.what();
    }
    // Without a usable G34 model, a directly supplied G33 file must pass the same G33 gates.
    const std::string direct = data_dir() + "/g33.arr";
    if (!std::filesystem::exists(direct)) return;
    r.checks.push_back("G34 gate failed (" + r.failure + "); trying " + direct);
    r.source = direct;
    try {
      Arrangement loc = arr_read_file(direct).renamed("g33");
      check_g33(loc, r.checks);
      result.g33 = std::move(loc);
      r.failure.clear();
      r.passed = true;
    } catch (const std::exception& e) {
      r.failure = e.what();
    }
  });
  return result;
}

}  // namespace

Arrangement g34(GateReport* report) {
  const GateResult& g = gate();
  if (report) *report = g.report;
  if (!g.report.passed) throw ValidationError("blocked by data gate: " + g.report.failure);
  if (!g.g34) throw ValidationError("blocked by data gate: G33 came from " + g.report.source + ", no G34 model");
  return *g.g34;
}

Arrangement g33(GateReport* report) {
  const GateResult& g = gate();
  if (report) *report = g.report;
  if (!g.report.passed) throw ValidationError("blocked by data gate: " + g.report.failure);
  return *g.g33;
}

std::vector<Entry> entries() {
  return {
      {"boolean2", "coordinate hyperplanes of Q^2"},
      {"boolean3", "coordinate hyperplanes of Q^3"},
      {"boolean4", "coordinate hyperplanes of Q^4"},
      {"g222", "A(G(2,2,2)) = monomial(2,2,0)"},
      {"g333", "A(G(3,3,3)) = monomial(3,3,0), 9 hyperplanes"},
      {"g313", "A(G(3,1,3)) = monomial(3,3,3), 12 hyperplanes"},
      {"g422", "A(G(4,2,2)) = monomial(4,2,2), 6 hyperplanes"},
      {"g444", "A(G(4,4,4)) = monomial(4,4,0), 24 hyperplanes"},
      {"g24", "reflection arrangement of G24 over Q(zeta_7), 21 hyperplanes"},
      {"g24_a12", "g24 plus the twelve resolution hyperplanes, 33 hyperplanes"},
      {"g29", "first 40 hyperplanes of g31"},
      {"g31", "reflection arrangement of G31 over Q(i), 60 hyperplanes"},
      {"g33_a1", "28-hyperplane restriction of G33 over Q(zeta_3)"},
      {"g33_a1_tilde", "g33_a1 minus its 6 filtration deletions plus the 2 additions, 24 hyperplanes"},
      {"g34", "data/g34.arr, gated: 126 hyperplanes"},
      {"g33", "localization of g34 at a 45-hyperplane flat, gated"},
  };
}

std::vector<std::string> pool_names() { return {"g24_resolution", "coordinates3", "coordinates4", "g33_a1_additions"}; }

std::vector<Hyperplane> pool(const std::string& name) {
  if (name == "g24_resolution") return g24_resolution();
  if (name == "coordinates3") return coordinate_hyperplanes(3, 3);
  if (name == "coordinates4") return coordinate_hyperplanes(4, 4);
  if (name == "g33_a1_additions") return g33_a1().additions;
  throw InvalidArgument("unknown pool '" + name + "'");
}

namespace {

Arrangement build_uncached(const std::string& name) {
  if (name.rfind("boolean", 0) == 0 && name.size() > 7) {
    const std::string n = name.substr(7);
    if (n.size() <= 2 && std::all_of(n.begin(), n.end(), ::isdigit)) {
      const auto l = static_cast<std::size_t>(std::stoi(n));
      if (l >= 1) return boolean(l);
    }
  }
  if (name == "g222") return monomial(2, 2, 0).renamed(name);
  if (name == "g333") return monomial(3, 3, 0).renamed(name);
  if (name == "g313") return monomial(3, 3, 3).renamed(name);
  if (name == "g422") return monomial(4, 2, 2).renamed(name);
  if (name == "g444") {
    Arrangement a = monomial(4, 4, 0).renamed(name);
    expect(a.size() == 24, name, "expected 24 hyperplanes");
    return a;
  }
  if (name == "g24") {
    Arrangement a = g24();
    expect(a.size() == 21, name, "expected 21 hyperplanes");
    expect_charpoly(a, name, {1, 9, 11});
    const auto res = g24_resolution();
    expect(res.size() == 12, name, "resolution list must have 12 entries");
    for (const auto& h : res) expect(!a.contains(h), name, "resolution hyperplane " + h.key() + " lies in A");
    return a;
  }
  if (name == "g24_a12") return g24_resolved().renamed(name);
  if (name == "g31") {
    Arrangement a = g31();
    expect(a.size() == 60, name, "expected 60 hyperplanes");
    Lattice L = Lattice::build(a);
    expect(L.charpoly() == Poly::from_roots({1, 13, 17, 29}), name, "chi = " + L.charpoly().str());
    expect(L.rank2_profile() == std::map<int, int>{{2, 360}, {3, 320}, {6, 30}}, name,
           "rank-2 profile " + profile_str(L.rank2_profile()));
    return a;
  }
  if (name == "g29") {
    Arrangement a = g29();
    expect(a.size() == 40, name, "expected 40 hyperplanes");
    expect_charpoly(a, name, {1, 9, 13, 17});
    return a;
  }
  if (name == "g33_a1") {
    Arrangement a = g33_a1().arrangement;
    expect(a.size() == 28, name, "expected 28 hyperplanes");
    expect(a.rank() == 4, name, "expected rank 4");
    return a;
  }
  if (name == "g33_a1_tilde") {
    RestrictionCase rc = g33_a1();
    IndexSet keep = rc.arrangement.all();
    for (int d : rc.deletions) keep.reset(static_cast<std::size_t>(d));
    Arrangement a = rc.arrangement.subarrangement(keep);
    for (const auto& h : rc.additions) a = a.with(h);
    expect(a.size() == 24, name, "expected 24 hyperplanes");
    return a.renamed(name);
  }
  if (name == "g34") return g34();
  if (name == "g33") return g33();
  throw InvalidArgument("unknown catalog entry '" + name + "'");
}

}  // namespace

Arrangement build(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, Arrangement> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
  }
  Arrangement a = build_uncached(name);
  if (a.name() != name) a = a.renamed(name);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(name, std::move(a)).first->second;
}

void seed_facts(FactRegistry& facts, bool gated) {
  auto free = [](Exponents e, std::string source) { return Fact{Status::Free, std::move(e), std::move(source)}; };
  facts.insert(build("g24").key(), free({1, 9, 11}, "A(G24) is free (reflection arrangement)"));
  const Arrangement a31 = build("g31");
  facts.insert(a31.key(), free({1, 13, 17, 29}, "A(G31) is free (reflection arrangement)"));
  for (std::size_t i = 0; i < a31.size(); ++i) {
    facts.insert(a31.restrict_to_index(i).key(), free({1, 13, 17}, "restrictions of A(G31) are free"));
  }
  if (gated) {
    GateReport r;
    try {
      facts.insert(g33(&r).key(), free({1, 7, 9, 13, 15}, "A(G33) is free (reflection arrangement)"));
    } catch (const ValidationError&) {
      // Without the gate there is nothing to attach the fact to.
    }
  }
  facts.note("minimal FFSA of (A(G34), A1^2)", {{1, 13, 15, 15}});
  facts.note("minimal FFSA of (A(G34), A2)", {{1, 9, 10, 11}, {1, 10, 10, 10}});
}

FactRegistry& seeded_facts() {
  static FactRegistry facts;
  static std::once_flag once;
  std::call_once(once, [] { seed_facts(facts); });
  return facts;
}

}  // namespace hyperarr::catalog
