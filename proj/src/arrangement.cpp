#include "hyperarr/arrangement.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hyperarr/errors.hpp"

namespace hyperarr {

Hyperplane::Hyperplane(Vec covector) : alpha_(std::move(covector)) {
  if (alpha_.empty()) throw InvalidArgument("hyperplane covector must be nonempty");
  if (!normalize_leading_one(alpha_)) throw InvalidArgument("zero covector does not define a hyperplane");
  key_ = "(";
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    if (i) key_ += ",";
    key_ += alpha_[i].str();
  }
  key_ += ")";
}

Hyperplane Hyperplane::parse(CyclotomicField f, const std::vector<std::string>& coords) {
  Vec v;
  v.reserve(coords.size());
  for (const auto& c : coords) v.push_back(f.parse(c));
  return Hyperplane(std::move(v));
}

Arrangement::Arrangement(CyclotomicField f, std::size_t dim, std::vector<Hyperplane> hyperplanes, std::string name)
    : field_(f), dim_(dim), hs_(std::move(hyperplanes)), name_(std::move(name)) {
  if (hs_.size() > IndexSet::kCapacity) throw InvalidArgument("arrangement exceeds index capacity");
  for (std::size_t i = 0; i < hs_.size(); ++i) {
    if (hs_[i].dim() != dim_) throw InvalidArgument("covector length does not match dimension");
    if (hs_[i].field() != field_) throw FieldMismatch("hyperplane over a different field");
    if (!index_.emplace(hs_[i].key(), i).second) {
      throw InvalidArgument("duplicate hyperplane " + hs_[i].key());
    }
  }
}

Arrangement Arrangement::from_covectors(CyclotomicField f, std::size_t dim, const std::vector<Vec>& covectors,
                                        std::string name) {
  std::vector<Hyperplane> hs;
  hs.reserve(covectors.size());
  for (const auto& c : covectors) hs.emplace_back(c);
  return Arrangement(f, dim, std::move(hs), std::move(name));
}

Arrangement Arrangement::renamed(std::string name) const {
  Arrangement a = *this;
  a.name_ = std::move(name);
  return a;
}

std::optional<std::size_t> Arrangement::index_of(const Hyperplane& h) const {
  auto it = index_.find(h.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ArrKey Arrangement::key() const {
  std::vector<std::string> keys;
  keys.reserve(hs_.size());
  for (const auto& h : hs_) keys.push_back(h.key());
  std::sort(keys.begin(), keys.end());
  std::string t = "l=" + std::to_string(dim_) + ";n=" + std::to_string(field_.order()) + ";";
  for (const auto& k : keys) t += k;
  return ArrKey{std::move(t)};
}

Arrangement Arrangement::drop_zero_coordinates() const {
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < dim_; ++j) {
    if (std::any_of(hs_.begin(), hs_.end(), [&](const Hyperplane& h) { return !h.covector()[j].is_zero(); })) {
      keep.push_back(j);
    }
  }
  if (keep.size() == dim_ || keep.empty()) return *this;
  std::vector<Hyperplane> hs;
  for (const auto& h : hs_) {
    Vec v;
    for (auto j : keep) v.push_back(h.covector()[j]);
    hs.emplace_back(std::move(v));
  }
  return Arrangement(field_, keep.size(), std::move(hs), name_);
}

Arrangement Arrangement::without(const Hyperplane& h) const {
  auto i = index_of(h);
  if (!i) throw InvalidArgument("hyperplane " + h.key() + " is not in the arrangement");
  return without_index(*i);
}

Arrangement Arrangement::without_index(std::size_t i) const {
  if (i >= hs_.size()) throw InvalidArgument("hyperplane index out of range");
  std::vector<Hyperplane> hs;
  hs.reserve(hs_.size() - 1);
  for (std::size_t j = 0; j < hs_.size(); ++j)
    if (j != i) hs.push_back(hs_[j]);
  return Arrangement(field_, dim_, std::move(hs));
}

Arrangement Arrangement::with(const Hyperplane& h) const {
  if (h.dim() != dim_) throw InvalidArgument("covector length does not match dimension");
  if (contains(h)) throw InvalidArgument("hyperplane " + h.key() + " is already in the arrangement");
  std::vector<Hyperplane> hs = hs_;
  hs.push_back(h);
  return Arrangement(field_, dim_, std::move(hs));
}

Arrangement Arrangement::subarrangement(const IndexSet& members) const {
  std::vector<Hyperplane> hs;
  members.for_each([&](int i) {
    if (static_cast<std::size_t>(i) >= hs_.size()) throw InvalidArgument("member index out of range");
    hs.push_back(hs_[static_cast<std::size_t>(i)]);
  });
  return Arrangement(field_, dim_, std::move(hs));
}

std::vector<Vec> hyperplane_basis(const Hyperplane& h) {
  Matrix m = Matrix::from_rows(h.field(), h.dim(), {h.covector()});
  return kernel(m).row_list();
}

Arrangement Arrangement::restrict_to(const Hyperplane& h) const {
  auto idx = index_of(h);
  if (!idx) throw InvalidArgument("restriction hyperplane " + h.key() + " is not in the arrangement");
  return restrict_to_index(*idx);
}

Arrangement Arrangement::restrict_to_index(std::size_t i) const {
  if (i >= hs_.size()) throw InvalidArgument("hyperplane index out of range");
  const std::vector<Vec> basis = hyperplane_basis(hs_[i]);
  std::vector<Hyperplane> traces;
  std::unordered_map<std::string, bool> seen;
  for (std::size_t j = 0; j < hs_.size(); ++j) {
    if (j == i) continue;
    Vec t;
    t.reserve(basis.size());
    for (const Vec& b : basis) t.push_back(dot(hs_[j].covector(), b));
    if (is_zero_vec(t)) continue;
    Hyperplane tr(std::move(t));
    if (seen.emplace(tr.key(), true).second) traces.push_back(std::move(tr));
  }
  return Arrangement(field_, dim_ - 1, std::move(traces));
}

Arrangement Arrangement::essentialize() const {
  if (hs_.empty()) return Arrangement(field_, 0);
  std::vector<Vec> rows;
  for (const auto& h : hs_) rows.push_back(h.covector());
  RrefResult r = rref(Matrix::from_rows(field_, dim_, rows));
  std::vector<Hyperplane> hs;
  for (const auto& h : hs_) {
    Vec v;
    for (std::size_t p : r.pivots) v.push_back(h.covector()[p]);
    hs.emplace_back(std::move(v));
  }
  return Arrangement(field_, r.rank, std::move(hs), name_);
}

std::size_t Arrangement::rank() const {
  std::vector<Vec> rows;
  for (const auto& h : hs_) rows.push_back(h.covector());
  return rank_of_rows(field_, dim_, rows);
}

std::vector<IndexSet> Arrangement::components() const {
  const std::size_t n = hs_.size();
  if (n == 0) return {};
  // Columns are the covectors; pivot columns form a greedy basis and each
  // other column's entries give its fundamental circuit.
  Matrix m(field_, dim_, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < dim_; ++i) m.at(i, j) = hs_[j].covector()[i];
  RrefResult r = rref(m);
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : r.pivots) is_pivot[p] = true;
  for (std::size_t j = 0; j < n; ++j) {
    if (is_pivot[j]) continue;
    for (std::size_t i = 0; i < r.rank; ++i) {
      if (!r.reduced.at(i, j).is_zero()) parent[find(r.pivots[i])] = find(j);
    }
  }
  std::vector<IndexSet> comps;
  std::unordered_map<std::size_t, std::size_t> slot;
  for (std::size_t j = 0; j < n; ++j) {
    auto [it, fresh] = slot.emplace(find(j), comps.size());
    if (fresh) comps.emplace_back();
    comps[it->second].set(j);
  }
  return comps;
}

bool Arrangement::is_irreducible() const { return components().size() == 1; }

Arrangement product(const Arrangement& a, const Arrangement& b) {
  if (a.field() != b.field()) throw FieldMismatch("product of arrangements over different fields");
  const std::size_t l = a.dim() + b.dim();
  std::vector<Hyperplane> hs;
  for (const auto& h : a.hyperplanes()) {
    Vec v = h.covector();
    v.resize(l, a.field().zero());
    hs.emplace_back(std::move(v));
  }
  for (const auto& h : b.hyperplanes()) {
    Vec v(a.dim(), a.field().zero());
    v.insert(v.end(), h.covector().begin(), h.covector().end());
    hs.emplace_back(std::move(v));
  }
  return Arrangement(a.field(), l, std::move(hs));
}

std::string arr_serialize(const Arrangement& a) {
  std::vector<const Hyperplane*> order;
  for (const auto& h : a.hyperplanes()) order.push_back(&h);
  std::sort(order.begin(), order.end(), [](const Hyperplane* x, const Hyperplane* y) { return x->key() < y->key(); });
  std::ostringstream out;
  out << "field cyclotomic " << a.field().order() << "\n";
  out << "dim " << a.dim() << "\n";
  for (const Hyperplane* h : order) {
    out << "h";
    for (const auto& c : h->covector()) out << " " << c.str();
    out << "\n";
  }
  return out.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int parse_positive(const std::string& tok, std::size_t line, const char* what) {
  if (tok.empty() || tok.size() > 6 || !std::all_of(tok.begin(), tok.end(), ::isdigit)) {
    throw ParseError(std::string("line ") + std::to_string(line) + ": invalid " + what + " '" + tok + "'", line);
  }
  return std::stoi(tok);
}

}  // namespace

Arrangement arr_parse(std::string_view text, std::string name) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  int stage = 0;
  int order = 0;
  std::size_t dim = 0;
  std::optional<CyclotomicField> field;
  std::vector<Hyperplane> hs;
  std::unordered_map<std::string, std::size_t> seen;
  auto fail = [&](const std::string& msg) { return ParseError("line " + std::to_string(line_no) + ": " + msg, line_no); };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::vector<std::string> tok = split_ws(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (tok.empty()) continue;
    if (stage == 0) {
      if (tok.size() != 3 || tok[0] != "field" || tok[1] != "cyclotomic") throw fail("expected 'field cyclotomic <n>'");
      order = parse_positive(tok[2], line_no, "field order");
      if (order < 1) throw fail("unknown field order " + tok[2]);
      field = CyclotomicField::make(order);
      stage = 1;
    } else if (stage == 1) {
      if (tok.size() != 2 || tok[0] != "dim") throw fail("expected 'dim <l>'");
      dim = static_cast<std::size_t>(parse_positive(tok[1], line_no, "dimension"));
      stage = 2;
    } else {
      if (tok[0] != "h") throw fail("expected 'h <c1> ... <cl>'");
      if (tok.size() - 1 != dim) {
        throw fail("covector has " + std::to_string(tok.size() - 1) + " entries, expected " + std::to_string(dim));
      }
      std::vector<std::string> coords(tok.begin() + 1, tok.end());
      try {
        Hyperplane h = Hyperplane::parse(*field, coords);
        if (!seen.emplace(h.key(), line_no).second) throw fail("duplicate hyperplane " + h.key());
        hs.push_back(std::move(h));
      } catch (const ParseError& e) {
        if (std::string_view(e.what()).rfind("line ", 0) == 0) throw;
        throw fail(e.what());
      } catch (const InvalidArgument& e) {
        throw fail(e.what());
      }
    }
  }
  if (stage < 2) throw ParseError("missing header lines", line_no);
  if (hs.size() > IndexSet::kCapacity) throw ParseError("too many hyperplanes", line_no);
  return Arrangement(*field, dim, std::move(hs), std::move(name));
}

Arrangement arr_read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return arr_parse(ss.str(), path);
}

void arr_write_file(const Arrangement& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << arr_serialize(a);
}

}  // namespace hyperarr
