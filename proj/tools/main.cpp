#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hyperarr/catalog.hpp"
#include "hyperarr/criteria.hpp"
#include "hyperarr/errors.hpp"
#include "hyperarr/freeness.hpp"
#include "hyperarr/g31.hpp"
#include "hyperarr/lattice.hpp"
#include "hyperarr/report.hpp"
#include "hyperarr/sweep.hpp"

using namespace hyperarr;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kFalsified = 1, kInput = 2, kBudget = 3 };

struct Config {
  std::string catalog;
  std::string in;
  bool json = false;
  std::string out;
  std::string cert_out;
  std::size_t budget = 0;  // 0: library defaults
  unsigned threads = 1;
  std::uint64_t seed = 0;
  int max_rank = -1;
};

// Input errors detected by the CLI itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_input(CLI::App* cmd, Config& c) {
  auto* cat = cmd->add_option("--catalog", c.catalog, "catalog entry name");
  auto* in = cmd->add_option("--in", c.in, "arrangement file (.arr)");
  cat->excludes(in);
}

void add_output(CLI::App* cmd, Config& c) {
  cmd->add_flag("--json", c.json, "structured output");
  cmd->add_option("--out", c.out, "write the report to this file instead of stdout");
}

void add_budget(CLI::App* cmd, Config& c) {
  cmd->add_option("--budget", c.budget, "flat budget for lattices, node budget for searches")
      ->check(CLI::PositiveNumber);
}

void add_threads(CLI::App* cmd, Config& c) {
  cmd->add_option("--threads", c.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
}

void add_seed(CLI::App* cmd, Config& c) { cmd->add_option("--seed", c.seed, "seed for all sampling"); }

Arrangement load(const Config& c) {
  if (c.catalog.empty() == c.in.empty()) throw UsageError("give exactly one of --catalog NAME or --in FILE");
  return c.catalog.empty() ? arr_read_file(c.in) : catalog::build(c.catalog);
}

std::size_t flat_budget(const Config& c) { return c.budget ? c.budget : kDefaultFlatBudget; }

SearchOptions search_options(const Config& c) {
  SearchOptions o;
  if (c.budget) o.node_budget = c.budget;
  return o;
}

void write(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write " + c.out);
  f << text;
}

// Prints the JSON document (with its schema version) or the text summary.
void emit(const Config& c, const std::string& command, json j, const std::string& text) {
  if (!c.json) {
    write(c, text);
    return;
  }
  json doc{{"schema", 1}, {"command", command}};
  doc.update(j);
  write(c, doc.dump(2) + "\n");
}

std::string exps_text(const Exponents& e) { return exponents_str(e); }

int cmd_charpoly(const Config& c) {
  const Arrangement a = load(c);
  const Lattice l = Lattice::build(a, std::nullopt, flat_budget(c));
  const Poly chi = l.charpoly();
  json j{{"arrangement", report::arrangement(a)}, {"charpoly", report::poly(chi)}};
  const auto e = exponents_from_charpoly(chi, a.size());
  j["exponents"] = e ? json(*e) : json(nullptr);
  emit(c, "charpoly", j, chi.str() + "\n");
  return kPass;
}

int cmd_lattice(const Config& c) {
  const Arrangement a = load(c);
  const Lattice l = Lattice::build(a, c.max_rank >= 0 ? std::optional<int>(c.max_rank) : std::nullopt, flat_budget(c));
  std::ostringstream t;
  t << "flats by rank:";
  for (int r = 0; r <= l.rank(); ++r) t << ' ' << l.layer(r).size();
  t << "\nrank-2 profile: " << profile_str(l.rank2_profile()) << '\n';
  if (l.complete()) t << "chi: " << l.charpoly().str() << '\n';
  else t << "lattice truncated at rank " << l.rank() << '\n';
  emit(c, "lattice", {{"arrangement", report::arrangement(a)}, {"lattice", report::lattice(l)}}, t.str());
  return kPass;
}

int cmd_profile(const Config& c) {
  const Arrangement a = load(c);
  const Lattice l = Lattice::build(a, 2, flat_budget(c));
  json p = json::object();
  for (auto [k, m] : l.rank2_profile()) p[std::to_string(k)] = m;
  const std::string s = profile_str(l.rank2_profile());
  emit(c, "profile", {{"arrangement", report::arrangement(a)}, {"profile", p}, {"text", s}}, s + "\n");
  return kPass;
}

int cmd_certify(const Config& c, const std::string& cls, const std::string& pool_name, int depth) {
  const Arrangement a = load(c);
  const FactRegistry& facts = catalog::seeded_facts();
  ClassResult r;
  if (cls == "inductive") {
    r = inductively_free(a, &facts, search_options(c));
  } else if (cls == "divisional") {
    r = divisionally_free(a, &facts, search_options(c));
  } else if (cls == "free") {
    r = certify_free(a, &facts, search_options(c));
  } else {
    const std::vector<Hyperplane> pool = pool_name.empty() ? std::vector<Hyperplane>{} : catalog::pool(pool_name);
    const int d = depth >= 0 ? depth : static_cast<int>(pool.size());
    r = recursively_free_search(a, pool, d, &facts, search_options(c));
  }
  json j{{"arrangement", report::arrangement(a)}, {"class", cls}, {"result", report::class_result(r)}};
  if (cls == "recursive") j["pool"] = pool_name;
  std::ostringstream t;
  t << cls << ": " << to_string(r.membership) << '\n';
  t << "freeness: " << to_string(r.freeness);
  if (r.freeness == Status::Free) t << ' ' << exps_text(r.exponents);
  t << '\n';
  if (!r.reason.empty()) t << "reason: " << r.reason << '\n';
  t << "search nodes: " << r.nodes << '\n';
  if (r.cert) {
    const VerifyResult v = cert_verify(a, *r.cert, &facts);
    j["verified"] = v.ok;
    t << "certificate: " << cert_size(*r.cert) << " nodes, verified " << (v.ok ? "yes" : "no: " + v.failure) << '\n';
    if (!c.cert_out.empty()) {
      std::ofstream f(c.cert_out);
      if (!f) throw UsageError("cannot write " + c.cert_out);
      f << cert_to_json(*r.cert).dump(2) << '\n';
    }
    if (!v.ok) {
      emit(c, "certify", j, t.str());
      return kFalsified;
    }
  }
  emit(c, "certify", j, t.str());
  if (r.membership == Membership::Unknown && r.reason.find("budget") != std::string::npos) return kBudget;
  return kPass;
}

std::string sweep_text(const SweepReport& s) {
  std::ostringstream t;
  t << "arrangement: " << s.size << " hyperplanes, exponents " << exps_text(s.exponents) << '\n';
  t << "candidates: " << s.external_candidates << " external, " << s.internal_candidates << " internal\n";
  t << "obstruction histogram:";
  for (auto [k, v] : s.histogram) t << ' ' << k << ':' << v;
  t << "\nstages:";
  for (const auto& [k, v] : s.stage_counts) t << ' ' << k << ':' << v;
  t << "\ncomplete: " << (s.complete ? "yes" : "no") << " (max |A_X|-1 = " << s.max_single_flat
    << ", min admissible exponent " << s.min_admissible << ")\n";
  if (!s.note.empty()) t << "note: " << s.note << '\n';
  t << "survivors: " << s.survivors.size() << '\n';
  for (const auto& o : s.survivors) t << "  " << o.hyperplane.key() << " sum " << o.sum << '\n';
  t << "internal survivors: " << s.internal_survivors.size() << '\n';
  return t.str();
}

int cmd_sweep(const Config& c, std::string ambient, bool all_charpolys) {
  const Arrangement a = load(c);
  if (ambient.empty() && c.catalog == "g29") ambient = "g31";
  std::shared_ptr<Pool> p;
  IndexSet b;
  if (ambient.empty()) {
    p = Pool::make(a, flat_budget(c));
    b = p->all();
  } else {
    p = Pool::make(catalog::build(ambient), flat_budget(c));
    for (const auto& h : a.hyperplanes()) {
      const auto i = p->index_of(h);
      if (!i) throw UsageError("hyperplane " + h.key() + " is not in the ambient arrangement " + ambient);
      b.set(*i);
    }
  }
  Searcher searcher(search_options(c), &catalog::seeded_facts());
  ClassResult fr = searcher.free(*p, b);
  std::string how = fr.freeness == Status::Free ? "certified" : "";
  if (fr.freeness != Status::Free && !ambient.empty()) {
    // A free filtration from the ambient arrangement down to the input.
    const ClassResult whole = searcher.free(*p, p->all());
    if (whole.freeness == Status::Free) {
      const auto ff = g31::find_filtration(searcher, *p, p->all(), whole.cert, p->all() - b);
      if (ff.result == g31::Search::Found) {
        fr.freeness = Status::Free;
        fr.exponents = ff.exponents;
        how = "free filtration from " + ambient;
      }
    }
  }
  if (fr.freeness != Status::Free) {
    if (fr.reason.find("budget") != std::string::npos) {
      std::cerr << "freeness search stopped: " << fr.reason << '\n';
      return kBudget;
    }
    throw UsageError("the sweep needs a free arrangement; freeness is " + to_string(fr.freeness) +
                     (fr.reason.empty() ? "" : " (" + fr.reason + ")"));
  }
  const SweepReport s = no_free_addition(*p, b, fr.exponents, SweepOptions{c.threads, all_charpolys});
  json j{{"arrangement", report::arrangement(a)}, {"ambient", ambient.empty() ? json(nullptr) : json(ambient)},
         {"freeness", how}, {"sweep", report::sweep(s, true)}};
  emit(c, "sweep", j, "freeness: " + how + "\n" + sweep_text(s));
  return kPass;
}

int cmd_catalog_list(const Config& c) {
  json list = json::array();
  std::ostringstream t;
  for (const auto& e : catalog::entries()) {
    list.push_back({{"name", e.name}, {"description", e.description}});
    t << e.name << std::string(e.name.size() < 14 ? 14 - e.name.size() : 1, ' ') << e.description << '\n';
  }
  json pools = catalog::pool_names();
  t << "pools:";
  for (const auto& n : catalog::pool_names()) t << ' ' << n;
  t << '\n';
  emit(c, "catalog list", {{"entries", list}, {"pools", pools}}, t.str());
  return kPass;
}

int cmd_catalog_build(const Config& c, const std::string& name) {
  const Arrangement a = catalog::build(name);
  if (c.json) {
    Config to_stdout = c;
    if (!c.out.empty()) arr_write_file(a, c.out);
    to_stdout.out.clear();
    emit(to_stdout, "catalog build", {{"arrangement", report::arrangement(a)}, {"file", c.out}}, "");
    return kPass;
  }
  write(c, arr_serialize(a));
  return kPass;
}

struct G31Context {
  Arrangement a = catalog::build("g31");
  std::shared_ptr<Pool> p;
  g31::Partition part;
  Searcher s;
  CertPtr cert;

  G31Context() : p(Pool::make(a)), part(g31::compute_partition(*p)), cert(s.divisional(*p, p->all()).cert) {}
};

int cmd_g31_partition(const Config& c) {
  G31Context g;
  std::ostringstream t;
  t << g.part.blocks.size() << " blocks, " << g.part.stars.size() << " stars\n" << g31::grid_text(g.part);
  emit(c, "g31 partition", {{"partition", report::partition(g.part)}}, t.str());
  return kPass;
}

int cmd_g31_trichotomy(const Config& c) {
  G31Context g;
  const auto r = g31::trichotomy_check(*g.p, g.part);
  std::ostringstream t;
  t << "six-fold " << r.six << ", triangles " << r.triangle << ", simple " << r.simple << '\n';
  for (const auto& [k, v] : r.per_hyperplane) t << "per hyperplane " << k << ": " << v << '\n';
  t << "violations: " << r.violations << '\n';
  for (const auto& d : r.details) t << "  " << d << '\n';
  emit(c, "g31 trichotomy", {{"trichotomy", report::trichotomy(r)}}, t.str());
  return r.violations == 0 ? kPass : kFalsified;
}

int cmd_g31_sweep(const Config& c, std::size_t samples) {
  G31Context g;
  const CandidateSet cands = enumerate_candidates(*g.p);
  const auto r = g31::ffsa_no_addition_sweep(g.s, *g.p, g.part, g.cert, samples, c.seed, SweepOptions{c.threads, false},
                                             &cands);
  json list = json::array();
  std::ostringstream t;
  for (const auto& sm : r.samples) {
    list.push_back({{"label", sm.label}, {"certified", sm.certified}, {"sweep", report::sweep(sm.sweep)}});
    t << sm.label << ": " << sm.size << " hyperplanes, " << exps_text(sm.exponents)
      << (sm.certified ? "" : " (not certified)") << ", survivors " << sm.sweep.survivors.size() << " external, "
      << sm.sweep.internal_survivors.size() << " internal\n";
  }
  t << "external survivors: " << r.external_survivors << '\n';
  emit(c, "g31 sweep",
       {{"samples", list}, {"external_survivors", r.external_survivors}, {"all_complete", r.all_complete}},
       t.str());
  bool certified = true;
  for (const auto& sm : r.samples) certified = certified && sm.certified;
  return r.external_survivors == 0 && r.all_complete && certified ? kPass : kFalsified;
}

int cmd_g31_cross_validate(const Config& c, g31::CrossValidateOptions o) {
  G31Context g;
  o.seed = c.seed;
  const auto r = g31::ffsa_cross_validate(g.s, *g.p, g.part, g.cert, o);
  json by_size = json::object();
  std::ostringstream t;
  t << "samples " << r.samples << ", agree " << r.agree << ", mismatches " << r.mismatches << ", undecided "
    << r.undecided << '\n';
  for (const auto& [n, v] : r.by_size) {
    by_size[std::to_string(n)] = {{"predicted", v[0]}, {"found", v[1]}, {"agree", v[2]}};
    t << "|N| = " << n << ": predicted " << v[0] << ", found " << v[1] << ", agree " << v[2] << '\n';
  }
  t << "single deletions of A \\ M_i: " << r.minimal_nonfree << " of " << r.minimal_checked << " not free\n";
  for (const auto& d : r.mismatch_details) t << "  " << d << '\n';
  emit(c, "g31 cross-validate",
       {{"seed", o.seed},
        {"samples", r.samples},
        {"agree", r.agree},
        {"mismatches", r.mismatches},
        {"undecided", r.undecided},
        {"by_size", by_size},
        {"minimal_40", r.minimal_40},
        {"mismatch_details", r.mismatch_details}},
       t.str());
  return r.mismatches == 0 && r.undecided == 0 && r.minimal_40 ? kPass : kFalsified;
}

int cmd_verify(const Config& c, const std::vector<std::string>& sections, const std::string& result_file) {
  const std::vector<int> ids = criteria::for_sections(sections);
  criteria::Runner runner({c.threads, c.seed});
  json results = json::array();
  std::ostringstream t;
  std::size_t failed = 0;
  for (int id : ids) {
    const criteria::Result r = runner.run(id);
    results.push_back(criteria::to_json(r));
    for (const auto& l : r.lines) std::cerr << "  " << l << '\n';
    t << criteria::summary_line(r) << '\n';
    if (!r.pass) ++failed;
  }
  t << (failed ? std::to_string(failed) + " criteria failed" : "all criteria pass") << '\n';
  json doc{{"schema", 1},
           {"command", "verify"},
           {"sections", sections},
           {"seed", c.seed},
           {"threads", c.threads},
           {"pass", failed == 0},
           {"results", results}};
  std::ofstream f(result_file);
  if (!f) throw UsageError("cannot write " + result_file);
  f << doc.dump(2) << '\n';
  if (c.json) write(c, doc.dump(2) + "\n");
  else write(c, t.str());
  return failed ? kFalsified : kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact intersection lattices, characteristic polynomials and freeness certificates"};
  app.require_subcommand(1);
  Config c;

  auto* charpoly = app.add_subcommand("charpoly", "characteristic polynomial");
  auto* lattice = app.add_subcommand("lattice", "intersection lattice: flats by rank, mu, chi");
  auto* profile = app.add_subcommand("profile", "rank-2 profile |A_X|^count");
  for (auto* cmd : {charpoly, lattice, profile}) {
    add_input(cmd, c);
    add_output(cmd, c);
    add_budget(cmd, c);
  }
  lattice->add_option("--max-rank", c.max_rank, "stop after this rank")->check(CLI::NonNegativeNumber);

  auto* certify = app.add_subcommand("certify", "membership in a freeness class, with certificate");
  std::string cls = "free", pool_name;
  int depth = -1;
  add_input(certify, c);
  add_output(certify, c);
  add_budget(certify, c);
  certify->add_option("--class", cls, "inductive, divisional, recursive or free")
      ->check(CLI::IsMember({"inductive", "divisional", "recursive", "free"}));
  certify->add_option("--pool", pool_name, "addition pool for the recursive class")
      ->check(CLI::IsMember(catalog::pool_names()));
  certify->add_option("--depth", depth, "addition depth for the recursive class (default: pool size)")
      ->check(CLI::NonNegativeNumber);
  certify->add_option("--cert-out", c.cert_out, "write the certificate as JSON");

  auto* sweep = app.add_subcommand("sweep", "search for free additions");
  std::string ambient;
  bool all_charpolys = false;
  add_input(sweep, c);
  add_output(sweep, c);
  add_budget(sweep, c);
  add_threads(sweep, c);
  sweep->add_option("--ambient", ambient, "catalog arrangement containing the input (g29 defaults to g31)");
  sweep->add_flag("--all-charpolys", all_charpolys, "compute chi for every external candidate");

  auto* cat = app.add_subcommand("catalog", "named arrangements");
  cat->require_subcommand(1);
  auto* cat_list = cat->add_subcommand("list", "list catalog entries");
  add_output(cat_list, c);
  auto* cat_build = cat->add_subcommand("build", "build an entry and print it in .arr format");
  std::string entry;
  cat_build->add_option("name", entry, "entry name")->required();
  add_output(cat_build, c);

  auto* g31cmd = app.add_subcommand("g31", "the A(G31) partition and filtration analysis");
  g31cmd->require_subcommand(1);
  auto* g_part = g31cmd->add_subcommand("partition", "blocks, stars and the 6x6 grid");
  auto* g_tri = g31cmd->add_subcommand("trichotomy", "rank-2 flats through each hyperplane by case");
  auto* g_sweep = g31cmd->add_subcommand("sweep", "no-addition sweeps on sampled free filtration subarrangements");
  auto* g_cv = g31cmd->add_subcommand("cross-validate", "characterization against the filtration search");
  std::size_t samples = 20;
  g31::CrossValidateOptions cvo;
  g_sweep->add_option("--samples", samples, "number of sampled subarrangements")->check(CLI::PositiveNumber);
  g_cv->add_option("--exhaustive-up-to", cvo.exhaustive_up_to, "enumerate every N up to this size");
  g_cv->add_option("--random-per-size", cvo.random_per_size, "random N per larger size");
  g_cv->add_option("--max-random-size", cvo.max_random_size, "largest sampled |N|");
  for (auto* cmd : {g_part, g_tri, g_sweep, g_cv}) add_output(cmd, c);
  for (auto* cmd : {g_sweep, g_cv}) add_seed(cmd, c);
  add_threads(g_sweep, c);

  auto* verify = app.add_subcommand("verify", "run the acceptance criteria of the chosen sections");
  verify->alias("paper-verify");
  std::vector<std::string> sections;
  std::string result_file = "verify-result.json";
  verify->add_option("sections", sections, "g24 g31 g33 restrictions monomial properties (default: all)")
      ->check(CLI::IsMember(criteria::sections()));
  verify->add_option("--result", result_file, "machine-readable result file");
  add_output(verify, c);
  add_threads(verify, c);
  add_seed(verify, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (charpoly->parsed()) return cmd_charpoly(c);
    if (lattice->parsed()) return cmd_lattice(c);
    if (profile->parsed()) return cmd_profile(c);
    if (certify->parsed()) return cmd_certify(c, cls, pool_name, depth);
    if (sweep->parsed()) return cmd_sweep(c, ambient, all_charpolys);
    if (cat_list->parsed()) return cmd_catalog_list(c);
    if (cat_build->parsed()) return cmd_catalog_build(c, entry);
    if (g_part->parsed()) return cmd_g31_partition(c);
    if (g_tri->parsed()) return cmd_g31_trichotomy(c);
    if (g_sweep->parsed()) return cmd_g31_sweep(c, samples);
    if (g_cv->parsed()) return cmd_g31_cross_validate(c, cvo);
    if (verify->parsed()) return cmd_verify(c, sections, result_file);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInput;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kInput;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kInput;
  } catch (const FieldMismatch& e) {
    std::cerr << "field mismatch: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}
