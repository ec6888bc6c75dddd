#include "hyperarr/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <random>
#include <set>

#include "hyperarr/catalog.hpp"
#include "hyperarr/errors.hpp"
#include "hyperarr/freeness.hpp"
#include "hyperarr/g31.hpp"
#include "hyperarr/lattice.hpp"
#include "hyperarr/report.hpp"
#include "hyperarr/sweep.hpp"

namespace hyperarr::criteria {
namespace {

using Clock = std::chrono::steady_clock;

class Check {
 public:
  explicit Check(Result& r) : r_(r) {}
  bool operator()(bool ok, const std::string& what) {
    r_.lines.push_back((ok ? "ok    " : "FAIL  ") + what);
    if (!ok && r_.failure.empty()) r_.failure = what;
    return ok;
  }
  void note(const std::string& what) { r_.lines.push_back("      " + what); }

 private:
  Result& r_;
};

Exponents sorted(Exponents e) {
  std::sort(e.begin(), e.end());
  return e;
}

std::string join(const std::map<std::string, std::size_t>& m) {
  std::string s;
  for (const auto& [k, v] : m) s += (s.empty() ? "" : ", ") + k + " x" + std::to_string(v);
  return s.empty() ? "none" : s;
}

std::string join(const std::map<std::int64_t, std::size_t>& m) {
  std::string s;
  for (const auto& [k, v] : m) s += (s.empty() ? "" : " ") + std::to_string(k) + ":" + std::to_string(v);
  return s;
}

void sweep_lines(Check& check, const SweepReport& r) {
  check.note("external candidates " + std::to_string(r.external_candidates) + ", internal " +
             std::to_string(r.internal_candidates));
  check.note("obstruction sums " + join(r.histogram));
  check.note("stages " + join(r.stage_counts));
  check.note("completeness: max |A_X|-1 = " + std::to_string(r.max_single_flat) + ", min admissible exponent " +
             std::to_string(r.min_admissible) + (r.note.empty() ? "" : " (" + r.note + ")"));
}

const std::vector<Info> kInfo = {
    {1, "g24", "chi(A(G24)) = (t-1)(t-9)(t-11)", 10},
    {2, "g24", "G24 resolution table and supersolvable A_12", 120},
    {3, "g31", "chi(A(G31)) and its rank-2 profile", 300},
    {4, "g31", "G31 partition into 15 blocks and six stars; trichotomy", 300},
    {5, "g31", "free filtrations A(G31) -> A \\ M_i in random orders", 600},
    {6, "g31", "no free addition to A(G31)", 1800},
    {7, "g31", "no free addition to A(G29) and sampled FFSAs; G29 single deletions not free", 1800},
    {8, "g33", "A(G33) from the gated data: profile, exponents, no free addition", 1800},
    {9, "restrictions", "(A(G33), A1): filtration, two additions, inductively free end", 600},
    {10, "monomial", "A(G(3,3,3)) not inductively free, recursively free with the coordinate pool", 300},
    {11, "g31", "A(G31) divisionally free", 300},
    {12, "properties", "Whitney, exponent sums, Moebius signs, products, field axioms", 300},
};

}  // namespace

const std::vector<Info>& all() { return kInfo; }

std::vector<std::string> sections() { return {"g24", "g31", "g33", "restrictions", "monomial", "properties"}; }

std::vector<int> for_sections(const std::vector<std::string>& names) {
  const auto known = sections();
  std::set<std::string> want;
  for (const auto& n : names) {
    if (std::find(known.begin(), known.end(), n) == known.end()) {
      throw InvalidArgument("unknown section '" + n + "'");
    }
    want.insert(n);
  }
  std::vector<int> ids;
  for (const auto& info : kInfo) {
    if (want.empty() || want.count(info.section)) ids.push_back(info.id);
  }
  return ids;
}

nlohmann::json to_json(const Result& r) {
  return {{"id", r.id},       {"title", r.title},       {"pass", r.pass},
          {"blocked", r.blocked}, {"seconds", r.seconds}, {"limit_seconds", r.limit_seconds},
          {"lines", r.lines}, {"failure", r.failure},   {"data", r.data}};
}

std::string summary_line(const Result& r) {
  char t[32];
  std::snprintf(t, sizeof t, "%.1f", r.seconds);
  std::string s = std::string(r.pass ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.title + " (" + t +
                  " s, limit " + std::to_string(static_cast<long>(r.limit_seconds)) + " s)";
  if (!r.pass) s += ": " + r.failure;
  return s;
}

struct Runner::State {
  std::optional<Arrangement> a31;
  std::shared_ptr<Pool> pool;
  Searcher searcher;
  CertPtr a_cert;
  std::optional<g31::Partition> part;
  std::optional<CandidateSet> cands;

  const Pool& g31_pool() {
    if (!pool) {
      a31 = catalog::build("g31");
      pool = Pool::make(*a31);
    }
    return *pool;
  }
  CertPtr g31_cert() {
    if (!a_cert) {
      const Pool& p = g31_pool();
      ClassResult r = searcher.divisional(p, p.all());
      if (r.membership != Membership::Member) throw ValidationError("A(G31) is not certified free: " + r.reason);
      a_cert = r.cert;
    }
    return a_cert;
  }
  const g31::Partition& partition() {
    if (!part) part = g31::compute_partition(g31_pool());
    return *part;
  }
  const CandidateSet& candidates() {
    if (!cands) cands = enumerate_candidates(g31_pool());
    return *cands;
  }
};

Runner::Runner(Options opts) : opts_(opts), st_(std::make_unique<State>()) {}
Runner::~Runner() = default;

namespace {

void c1(Result& r, Check& check) {
  const Arrangement a = catalog::build("g24");
  const Poly chi = Lattice::build(a).charpoly();
  check(a.size() == 21, "|A(G24)| = " + std::to_string(a.size()));
  check(chi == Poly::from_roots({1, 9, 11}), "chi = " + chi.str());
  r.data["charpoly"] = chi.str();
}

void c2(Result& r, Check& check) {
  // Exponents of A_j and of A_j^{H_j}, j = 1..12.
  const std::vector<std::pair<Exponents, Exponents>> table = {
      {{1, 10, 11}, {1, 11}}, {{1, 11, 11}, {1, 11}}, {{1, 11, 12}, {1, 11}}, {{1, 11, 13}, {1, 11}},
      {{1, 12, 13}, {1, 13}}, {{1, 13, 13}, {1, 13}}, {{1, 13, 14}, {1, 13}}, {{1, 13, 15}, {1, 13}},
      {{1, 14, 15}, {1, 15}}, {{1, 15, 15}, {1, 15}}, {{1, 15, 16}, {1, 15}}, {{1, 15, 17}, {1, 15}},
  };
  const Arrangement a = catalog::build("g24");
  const auto adds = catalog::g24_resolution();
  ResolutionReport rep = verify_resolution(a, adds, &catalog::seeded_facts());
  check(rep.ok, "every addition certified" + (rep.failure.empty() ? "" : ": " + rep.failure));
  check(rep.start_exponents == Exponents{1, 9, 11}, "start exponents " + exponents_str(rep.start_exponents));
  check(rep.rows.size() == table.size(), std::to_string(rep.rows.size()) + " rows");
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t j = 0; j < rep.rows.size() && j < table.size(); ++j) {
    const auto& row = rep.rows[j];
    check(row.ok && row.exponents == table[j].first && row.restriction_exponents == table[j].second,
          "row " + std::to_string(j + 1) + ": " + exponents_str(row.exponents) + " / " +
              exponents_str(row.restriction_exponents));
    rows.push_back({{"j", j + 1}, {"exp", row.exponents}, {"restriction_exp", row.restriction_exponents}});
  }
  r.data["rows"] = rows;

  const Arrangement& a12 = rep.final_arrangement;
  check(a12.size() == 33, "|A_12| = " + std::to_string(a12.size()));
  // X is cut out by the four hyperplanes of A in the span of the first two coordinates and all H_j.
  IndexSet xs;
  for (std::size_t i = 0; i < a12.size(); ++i) {
    if (a12[i].covector()[2].is_zero()) xs.set(i);
  }
  check(xs.count() == 16, "hyperplanes containing X: " + std::to_string(xs.count()));
  const Lattice L = Lattice::build(a12);
  const auto x = L.find(xs);
  check(x.has_value() && L.flat(static_cast<std::size_t>(*x)).rank == 2, "X is a rank-2 flat of A_12");
  if (x) check(L.is_modular(*x), "X is modular");
  const auto chain = L.supersolvable_chain();
  check(chain.has_value(), "A_12 is supersolvable");
  check(L.charpoly() == Poly::from_roots({1, 15, 17}), "chi(A_12) = " + L.charpoly().str());
}

void c3(Result& r, Check& check, Runner::State& st) {
  const Pool& p = st.g31_pool();
  const Poly chi = p.lattice().charpoly();
  const auto prof = p.lattice().rank2_profile();
  check(p.size() == 60, "|A(G31)| = " + std::to_string(p.size()));
  check(chi == Poly::from_roots({1, 13, 17, 29}), "chi = " + chi.str());
  check(prof == std::map<int, int>{{2, 360}, {3, 320}, {6, 30}}, "rank-2 profile " + profile_str(prof));
  r.data["charpoly"] = chi.str();
  r.data["profile"] = profile_str(prof);
}

void c4(Result& r, Check& check, Runner::State& st) {
  const Pool& p = st.g31_pool();
  const g31::Partition& part = st.partition();
  bool sizes = part.blocks.size() == 15;
  for (const auto& b : part.blocks) sizes = sizes && b.count() == 4;
  check(sizes, std::to_string(part.blocks.size()) + " blocks of 4");
  check(part.stars.size() == 6, std::to_string(part.stars.size()) + " stars");
  for (std::size_t i = 0; i < part.m.size(); ++i) {
    const IndexSet rest = p.all() - part.m[i];
    const Poly chi = p.charpoly(rest);
    check(rest.count() == 40 && chi == Poly::from_roots({1, 9, 13, 17}),
          "|A \\ M_" + std::to_string(i + 1) + "| = " + std::to_string(rest.count()) + ", chi = " + chi.str());
  }
  bool pairs = true;
  for (std::size_t i = 0; i < part.m.size(); ++i) {
    for (std::size_t j = i + 1; j < part.m.size(); ++j) {
      const IndexSet ij = part.m[i] & part.m[j];
      pairs = pairs && std::find(part.blocks.begin(), part.blocks.end(), ij) != part.blocks.end();
      for (std::size_t k = j + 1; k < part.m.size(); ++k) pairs = pairs && (ij & part.m[k]).empty();
    }
  }
  check(pairs, "M_i and M_j meet in a block, no three M_i meet");
  const g31::TrichotomyReport t = g31::trichotomy_check(p, part);
  check(t.violations == 0, "trichotomy violations: " + std::to_string(t.violations) +
                               (t.details.empty() ? "" : " (" + t.details.front() + ")"));
  check.note("incidences: six " + std::to_string(t.six) + ", triangle " + std::to_string(t.triangle) + ", simple " +
             std::to_string(t.simple));
  r.data["trichotomy"] = {{"six", t.six}, {"triangle", t.triangle}, {"simple", t.simple}, {"violations", t.violations}};
  r.data["grid"] = g31::grid_text(part);
}

void c5(Result& r, Check& check, Runner::State& st, const Options& opts) {
  const Pool& p = st.g31_pool();
  const CertPtr start = st.g31_cert();
  const g31::Partition& part = st.partition();
  std::mt19937_64 rng(opts.seed);
  std::size_t runs = 0, ok = 0;
  for (std::size_t i = 0; i < part.m.size(); ++i) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<int> order = part.m[i].to_vector();
      std::shuffle(order.begin(), order.end(), rng);
      const FiltrationReport f = verify_filtration(st.searcher, p, p.all(), start, order);
      bool good = f.ok && f.steps.size() == order.size();
      std::string bad = f.failure;
      for (const auto& step : f.steps) {
        const auto k = static_cast<std::int64_t>(step.index);
        if (step.exponents != sorted({1, 13, 17, 29 - k}) || step.restriction_size != 31) {
          good = false;
          if (bad.empty()) bad = "step " + std::to_string(k) + " has exponents " + exponents_str(step.exponents);
        }
      }
      ++runs;
      ok += good;
      check(good, "M_" + std::to_string(i + 1) + " order " + std::to_string(rep + 1) +
                      (good ? ": ends at " + exponents_str(f.steps.back().exponents) : ": " + bad));
    }
  }
  r.data["filtrations"] = runs;
  r.data["certified"] = ok;
}

void c6(Result& r, Check& check, Runner::State& st, const Options& opts) {
  const Pool& p = st.g31_pool();
  const SweepReport s =
      no_free_addition(p, p.all(), {1, 13, 17, 29}, SweepOptions{opts.threads, true}, &st.candidates());
  sweep_lines(check, s);
  check(s.complete, "candidate set is complete");
  check(s.survivors.empty(), "survivors: " + std::to_string(s.survivors.size()));
  const std::string want = Poly::from_roots({1, 15, 16, 29}).str();
  bool only = !s.splitting_charpolys.empty();
  for (const auto& [chi, n] : s.splitting_charpolys) only = only && chi == want;
  check(only, "splitting chi(A u H): " + join(s.splitting_charpolys));
  check.note("fingerprint classes: " + std::to_string(s.fingerprint_classes.size()));
  r.data["sweep"] = report::sweep(s);
}

void c7(Result& r, Check& check, Runner::State& st, const Options& opts) {
  const Pool& p = st.g31_pool();
  const g31::Partition& part = st.partition();
  const Arrangement g29 = catalog::build("g29");
  IndexSet b;
  for (const auto& h : g29.hyperplanes()) {
    const auto i = p.index_of(h);
    if (!i) {
      check(false, "hyperplane " + h.key() + " of A(G29) is not in A(G31)");
      return;
    }
    b.set(*i);
  }
  const auto m = std::find_if(part.m.begin(), part.m.end(), [&](const IndexSet& mi) { return p.all() - mi == b; });
  if (!check(m != part.m.end(), "A(G29) = A(G31) \\ M_i for some i")) return;
  const std::vector<int> order = m->to_vector();
  const FiltrationReport f = verify_filtration(st.searcher, p, p.all(), st.g31_cert(), order);
  if (!check(f.ok, "A(G29) certified free by a filtration" + (f.ok ? "" : ": " + f.failure))) return;
  const Exponents e = f.steps.back().exponents;
  check(e == Exponents{1, 9, 13, 17} && p.charpoly(b) == Poly::from_roots(e),
        "exp A(G29) = " + exponents_str(e) + ", confirmed by chi");

  const SweepReport s = no_free_addition(p, b, e, SweepOptions{opts.threads, false}, &st.candidates());
  sweep_lines(check, s);
  check(s.complete && s.survivors.empty(), "A(G29): " + std::to_string(s.survivors.size()) +
                                               " external survivors, complete = " + (s.complete ? "yes" : "no"));
  check.note("free re-additions from A(G31): " + std::to_string(s.internal_survivors.size()));
  r.data["g29_sweep"] = report::sweep(s);

  std::size_t nonfree = 0;
  std::map<std::string, std::size_t> rules;
  b.for_each([&](int h) {
    const CertPtr c = g31::deletion_nonfree(st.searcher, p, b, f.final_cert, h);
    if (c->status == Status::NonFree) ++nonfree;
    ++rules[c->rule];
  });
  check(nonfree == 40, std::to_string(nonfree) + " of 40 single deletions certified not free (" + join(rules) + ")");
  r.data["g29_deletions_nonfree"] = nonfree;

  const g31::NoAdditionReport na = g31::ffsa_no_addition_sweep(st.searcher, p, part, st.g31_cert(), 20, opts.seed,
                                                               SweepOptions{opts.threads, false}, &st.candidates());
  std::size_t certified = 0;
  for (const auto& sample : na.samples) certified += sample.certified;
  check(na.samples.size() == 20 && certified == na.samples.size(),
        std::to_string(certified) + " of " + std::to_string(na.samples.size()) + " sampled FFSAs certified free");
  check(na.all_complete && na.external_survivors == 0,
        "sampled FFSAs: " + std::to_string(na.external_survivors) + " external survivors");
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& sample : na.samples) {
    samples.push_back({{"label", sample.label},
                       {"size", sample.size},
                       {"exponents", sample.exponents},
                       {"survivors", sample.sweep.survivors.size()},
                       {"internal_survivors", sample.sweep.internal_survivors.size()}});
  }
  r.data["samples"] = samples;
}

void c8(Result& r, Check& check, const Options& opts) {
  catalog::GateReport gate;
  std::optional<Arrangement> a;
  try {
    a = catalog::g33(&gate);
  } catch (const ValidationError&) {
    r.blocked = true;
    for (const auto& line : gate.checks) check.note(line);
    check(false, std::string("blocked by data gate: ") + gate.failure);
    return;
  }
  for (const auto& line : gate.checks) check.note(line);
  const Lattice L = Lattice::build(*a);
  const auto prof = L.rank2_profile();
  check(prof == std::map<int, int>{{2, 270}, {3, 240}}, "rank-2 profile " + profile_str(prof));
  const auto e = exponents_from_charpoly(L.charpoly(), a->size());
  check(e && *e == Exponents{1, 7, 9, 13, 15}, "exponents " + (e ? exponents_str(*e) : L.charpoly().str()));
  if (!e) return;
  const SweepReport s = no_free_addition(*a, *e, SweepOptions{opts.threads, true});
  sweep_lines(check, s);
  check(s.complete, "candidate set is complete");
  check(s.survivors.empty(), "survivors: " + std::to_string(s.survivors.size()));
  check.note("fingerprint classes: " + std::to_string(s.fingerprint_classes.size()));
  r.data["profile"] = profile_str(prof);
  r.data["sweep"] = report::sweep(s);
}

void c9(Result& r, Check& check) {
  const catalog::RestrictionCase rc = catalog::g33_a1();
  const Arrangement& a = rc.arrangement;
  check(a.size() == 28, "|A| = " + std::to_string(a.size()));
  const ClassResult start = divisionally_free(a);
  if (!check(start.membership == Membership::Member, "A certified free (" + (start.cert ? start.cert->rule : start.reason) + ")")) return;
  check(start.exponents == Exponents{1, 7, 9, 11}, "exp A = " + exponents_str(start.exponents));

  std::vector<Hyperplane> dels;
  for (int d : rc.deletions) dels.push_back(a[static_cast<std::size_t>(d)]);
  const FiltrationReport f = verify_filtration(a, dels, nullptr, start.cert);
  check(f.ok && f.steps.size() == 6, "six deletions certified" + (f.failure.empty() ? "" : ": " + f.failure));
  Arrangement cur = a;
  for (const auto& step : f.steps) {
    const Arrangement res = cur.restrict_to(step.hyperplane);
    const ClassResult rf = inductively_free(res);
    check(rf.membership == Membership::Member,
          "deletion " + std::to_string(step.index) + ": exp " + exponents_str(step.exponents) + ", restriction " +
              exponents_str(step.restriction_exponents) + " inductively free");
    cur = cur.without(step.hyperplane);
  }
  if (!f.ok) return;

  const ResolutionReport add = verify_resolution(cur, rc.additions, nullptr, f.final_cert);
  check(add.ok && add.rows.size() == 2, "additions I_1, I_2 certified" + (add.failure.empty() ? "" : ": " + add.failure));
  for (const auto& row : add.rows) {
    const Arrangement with = add.final_arrangement.subarrangement(IndexSet::range(cur.size() + row.index));
    const ClassResult rf = inductively_free(with.restrict_to(row.hyperplane));
    check(rf.membership == Membership::Member, "I_" + std::to_string(row.index) + ": exp " +
                                                   exponents_str(row.exponents) + ", restriction " +
                                                   exponents_str(row.restriction_exponents) + " inductively free");
  }
  if (!add.ok) return;
  const Arrangement& last = add.final_arrangement;
  const ClassResult ifr = inductively_free(last);
  check(last.size() == 24 && ifr.membership == Membership::Member,
        "final " + std::to_string(last.size()) + " hyperplanes inductively free, exp " + exponents_str(ifr.exponents) +
            " (" + std::to_string(ifr.nodes) + " nodes)");
  r.data["final_exponents"] = ifr.exponents;
  if (ifr.cert) {
    const VerifyResult v = cert_verify(last, *ifr.cert);
    check(v.ok, "certificate replays" + (v.ok ? "" : ": " + v.failure));
  }
}

void c10(Result& r, Check& check) {
  const Arrangement a = catalog::build("g333");
  const ClassResult i = inductively_free(a);
  check(i.membership == Membership::NonMember, "inductive: " + to_string(i.membership) + " after " +
                                                   std::to_string(i.nodes) + " nodes (" + i.reason + ")");
  const ClassResult rf = recursively_free_search(a, catalog::pool("coordinates3"), 3);
  check(rf.membership == Membership::Member,
        "recursive with {E_1,E_2,E_3}: " + to_string(rf.membership) + " " + exponents_str(rf.exponents));
  if (rf.cert) {
    const VerifyResult v = cert_verify(a, *rf.cert);
    check(v.ok, "certificate replays" + (v.ok ? "" : ": " + v.failure));
    r.data["rules"] = cert_rules(*rf.cert);
  }
}

void c11(Result& r, Check& check) {
  const Arrangement a = catalog::build("g31");
  const ClassResult d = divisionally_free(a);
  if (!check(d.membership == Membership::Member && d.cert && d.cert->rule == "division",
             "division chain found: " + to_string(d.membership) + " " + exponents_str(d.exponents))) {
    return;
  }
  const Arrangement res = a.restrict_to(*d.cert->hyperplane);
  const Poly chi_res = Lattice::build(res).charpoly();
  const Poly chi = Lattice::build(a).charpoly();
  check(chi_res == Poly::from_roots({1, 13, 17}), "chi(A^H) = " + chi_res.str());
  check(chi.divisible_by(chi_res), "chi(A^H) divides chi(A)");
  const VerifyResult v = cert_verify(a, *d.cert);
  check(v.ok, "certificate replays" + (v.ok ? "" : ": " + v.failure));
  r.data["certificate_nodes"] = cert_size(*d.cert);
}

Element random_element(CyclotomicField f, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  std::vector<Rational> c;
  for (int i = 0; i < f.degree(); ++i) c.emplace_back(num(rng), den(rng));
  return f.from_coeffs(std::move(c));
}

void c12(Result& r, Check& check, const Options& opts) {
  std::vector<Arrangement> small;
  for (const auto& e : catalog::entries()) {
    if (e.name == "g34" || e.name == "g33") continue;
    Arrangement a = catalog::build(e.name);
    if (a.size() <= 30) small.push_back(std::move(a));
  }

  std::size_t whitney = 0, whitney_bad = 0, mobius_bad = 0;
  for (const auto& a : small) {
    const Lattice L = Lattice::build(a);
    const Poly chi = L.charpoly();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Poly del = Lattice::build(a.without_index(i)).charpoly();
      const Poly res = Lattice::build(a.restrict_to_index(i)).charpoly();
      ++whitney;
      if (chi != del - res) ++whitney_bad;
    }
    const auto& mu = L.mobius();
    for (std::size_t x = 0; x < L.size(); ++x) {
      const int rk = L.flat(x).rank;
      if (mu[x] == 0 || (mu[x] > 0) != (rk % 2 == 0)) ++mobius_bad;
    }
  }
  check(whitney_bad == 0, "Whitney recursion on " + std::to_string(whitney) + " (A, H) pairs over " +
                              std::to_string(small.size()) + " arrangements");
  check(mobius_bad == 0, "Moebius sign alternation");

  std::mt19937_64 rng(opts.seed);
  std::size_t verdicts = 0, sum_bad = 0;
  auto check_free = [&](const Arrangement& a) {
    const ClassResult c = certify_free(a);
    if (c.freeness != Status::Free) return;
    ++verdicts;
    std::int64_t sum = 0;
    for (auto e : c.exponents) sum += e;
    const Poly chi = Lattice::build(a).charpoly();
    if (sum != static_cast<std::int64_t>(a.size()) || chi != Poly::from_roots(c.exponents)) ++sum_bad;
  };
  for (const auto& a : small) {
    check_free(a);
    for (int k = 0; k < 3; ++k) {
      IndexSet keep;
      std::bernoulli_distribution coin(0.7);
      for (std::size_t i = 0; i < a.size(); ++i)
        if (coin(rng)) keep.set(i);
      check_free(a.subarrangement(keep));
    }
  }
  check(verdicts > 0 && sum_bad == 0, "sum of exponents = |A| on " + std::to_string(verdicts) + " Free verdicts");

  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"boolean2", "boolean3"}, {"g222", "g222"}, {"g313", "g313"}, {"g422", "g422"}};
  for (const auto& [x, y] : pairs) {
    const Arrangement a = catalog::build(x), b = catalog::build(y);
    const ClassResult ca = certify_free(a), cb = certify_free(b);
    const Arrangement ab = product(a, b);
    const ClassResult cab = certify_free(ab);
    const Poly chi = Lattice::build(ab).charpoly();
    const bool ok = ca.freeness == Status::Free && cb.freeness == Status::Free && cab.freeness == Status::Free &&
                    cab.exponents == product_exponents(ca.exponents, cb.exponents) &&
                    chi == Lattice::build(a).charpoly() * Lattice::build(b).charpoly();
    check(ok, x + " x " + y + ": exp " + exponents_str(cab.exponents) + " = " + exponents_str(ca.exponents) + " u " +
                  exponents_str(cb.exponents));
  }

  std::size_t triples = 0, field_bad = 0;
  for (int n : {3, 4, 5, 7, 8, 12}) {
    const CyclotomicField f = CyclotomicField::make(n);
    for (int k = 0; k < 170; ++k, ++triples) {
      const Element a = random_element(f, rng), b = random_element(f, rng), c = random_element(f, rng);
      bool ok = (a + b) + c == a + (b + c) && (a * b) * c == a * (b * c) && a * (b + c) == a * b + a * c &&
                a * b == b * a && a + b == b + a && (a - a).is_zero() && a + f.zero() == a && a * f.one() == a;
      if (!a.is_zero()) ok = ok && (a * a.inverse()).is_one() && (b / a) * a == b;
      field_bad += !ok;
    }
  }
  check(field_bad == 0, "field axioms on " + std::to_string(triples) + " random triples");
  r.data["whitney_pairs"] = whitney;
  r.data["free_verdicts"] = verdicts;
}

}  // namespace

Result Runner::run(int id) {
  const auto it = std::find_if(kInfo.begin(), kInfo.end(), [&](const Info& i) { return i.id == id; });
  if (it == kInfo.end()) throw InvalidArgument("unknown criterion " + std::to_string(id));
  Result r;
  r.id = id;
  r.title = it->title;
  r.limit_seconds = it->limit_seconds;
  Check check(r);
  const auto t0 = Clock::now();
  try {
    switch (id) {
      case 1: c1(r, check); break;
      case 2: c2(r, check); break;
      case 3: c3(r, check, *st_); break;
      case 4: c4(r, check, *st_); break;
      case 5: c5(r, check, *st_, opts_); break;
      case 6: c6(r, check, *st_, opts_); break;
      case 7: c7(r, check, *st_, opts_); break;
      case 8: c8(r, check, opts_); break;
      case 9: c9(r, check); break;
      case 10: c10(r, check); break;
      case 11: c11(r, check); break;
      case 12: c12(r, check, opts_); break;
    }
  } catch (const std::exception& e) {
    check(false, std::string("error: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (r.failure.empty() && r.seconds >= r.limit_seconds) {
    check(false, "runtime " + std::to_string(r.seconds) + " s exceeds the limit");
  }
  r.pass = r.failure.empty();
  return r;
}

}  // namespace hyperarr::criteria
