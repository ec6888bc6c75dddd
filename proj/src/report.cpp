#include "hyperarr/report.hpp"

#include <cstdlib>
#include <string>

namespace hyperarr::report {

using nlohmann::json;

json poly(const Poly& p) {
  json j{{"coefficients", p.coeffs()}, {"text", p.str()}};
  // Nonnegative roots are bounded by their sum.
  const std::int64_t bound = p.degree() > 0 ? std::abs(p.coeff(static_cast<std::size_t>(p.degree() - 1))) : 0;
  if (auto r = p.integer_roots(bound)) j["roots"] = *r;
  return j;
}

json arrangement(const Arrangement& a) {
  return {{"name", a.name()}, {"field", a.field().order()}, {"dim", a.dim()}, {"size", a.size()},
          {"rank", a.rank()}};
}

json lattice(const Lattice& l) {
  // Mu needs the whole lattice; a truncated one reports flats only.
  const std::vector<std::int64_t>* m = l.complete() ? &l.mobius() : nullptr;
  json flats = json::array(), mu = json::array(), counts = json::array();
  for (int r = 0; r <= l.rank(); ++r) {
    json fr = json::array(), mr = json::array();
    for (int x : l.layer(r)) {
      fr.push_back(l.flat(static_cast<std::size_t>(x)).members.to_vector());
      if (m) mr.push_back((*m)[static_cast<std::size_t>(x)]);
    }
    counts.push_back(fr.size());
    flats.push_back(std::move(fr));
    mu.push_back(std::move(mr));
  }
  json j{{"atoms", l.atoms()}, {"rank", l.rank()}, {"complete", l.complete()}, {"flat_counts", counts},
         {"flats", flats}, {"rank2_profile", profile_str(l.rank2_profile())}};
  if (m) {
    j["mobius"] = mu;
    j["charpoly"] = poly(l.charpoly());
  }
  return j;
}

json class_result(const ClassResult& r) {
  json j{{"membership", to_string(r.membership)},
         {"freeness", to_string(r.freeness)},
         {"reason", r.reason},
         {"nodes", r.nodes}};
  if (r.freeness == Status::Free) j["exponents"] = r.exponents;
  if (r.cert) {
    j["certificate_size"] = cert_size(*r.cert);
    j["rules"] = cert_rules(*r.cert);
  }
  return j;
}

namespace {

json outcome(const CandidateOutcome& o) {
  json j{{"hyperplane", o.hyperplane.key()}, {"flats", o.flats}, {"sum", o.sum}, {"stage", o.stage}};
  if (o.chi) j["charpoly"] = o.chi->str();
  return j;
}

}  // namespace

json sweep(const SweepReport& r, bool detailed) {
  json h = json::object();
  for (const auto& [k, v] : r.histogram) h[std::to_string(k)] = v;
  json j{{"size", r.size},
         {"exponents", r.exponents},
         {"irreducible", r.irreducible},
         {"external_candidates", r.external_candidates},
         {"internal_candidates", r.internal_candidates},
         {"histogram", h},
         {"stages", r.stage_counts},
         {"splitting_charpolys", r.splitting_charpolys},
         {"charpolys_computed", r.charpolys_computed},
         {"max_single_flat", r.max_single_flat},
         {"min_admissible", r.min_admissible},
         {"complete", r.complete},
         {"note", r.note},
         {"survivors", r.survivors.size()},
         {"internal_survivors", r.internal_survivors.size()},
         {"fingerprint_classes", r.fingerprint_classes.size()}};
  if (detailed) {
    json s = json::array(), is = json::array();
    for (const auto& o : r.survivors) s.push_back(outcome(o));
    for (const auto& o : r.internal_survivors) is.push_back(outcome(o));
    j["survivor_list"] = s;
    j["internal_survivor_list"] = is;
    j["fingerprints"] = r.fingerprint_classes;
  }
  return j;
}

json partition(const g31::Partition& p) {
  json blocks = json::array(), stars = json::array(), m = json::array();
  for (std::size_t b = 0; b < p.blocks.size(); ++b)
    blocks.push_back({{"atoms", p.blocks[b].to_vector()}, {"stars", p.label[b]}});
  for (const auto& s : p.stars) stars.push_back(s);
  for (const auto& mi : p.m) m.push_back(mi.to_vector());
  return {{"blocks", blocks}, {"stars", stars}, {"m", m}, {"grid", g31::grid_text(p)}};
}

json trichotomy(const g31::TrichotomyReport& t) {
  return {{"six", t.six},
          {"triangle", t.triangle},
          {"simple", t.simple},
          {"violations", t.violations},
          {"details", t.details},
          {"per_hyperplane", t.per_hyperplane}};
}

}  // namespace hyperarr::report
