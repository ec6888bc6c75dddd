#include "hyperarr/field.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <mutex>

#include "hyperarr/errors.hpp"

namespace hyperarr {
namespace detail {

struct FieldData {
  int order = 1;
  int degree = 1;
  std::vector<std::int64_t> phi;
};

}  // namespace detail

namespace {

using IntPoly = std::vector<std::int64_t>;

// Exact division of integer polynomials by a monic divisor.
IntPoly divide_exact(IntPoly num, const IntPoly& den) {
  const std::size_t dn = den.size() - 1;
  IntPoly q(num.size() - dn, 0);
  for (std::size_t k = num.size(); k-- > dn;) {
    const std::int64_t c = num[k];
    q[k - dn] = c;
    if (c == 0) continue;
    for (std::size_t i = 0; i <= dn; ++i) num[k - dn + i] -= c * den[i];
  }
  for (std::size_t i = 0; i < dn; ++i) {
    if (num[i] != 0) throw std::logic_error("cyclotomic division left a remainder");
  }
  return q;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<int, std::unique_ptr<detail::FieldData>>& registry() {
  static std::map<int, std::unique_ptr<detail::FieldData>> r;
  return r;
}

using QPoly = std::vector<Rational>;

void trim(QPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

// Quotient and remainder of a by b over Q; b nonzero and trimmed.
std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
  trim(a);
  QPoly q;
  if (a.size() < b.size()) return {q, a};
  q.assign(a.size() - b.size() + 1, Rational());
  const Rational lead_inv = b.back().inverse();
  const std::size_t bd = b.size() - 1;
  for (std::size_t k = a.size(); k-- > bd;) {
    if (a[k].is_zero()) continue;
    Rational c = a[k] * lead_inv;
    const std::size_t shift = k - bd;
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
  }
  trim(a);
  trim(q);
  return {q, a};
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rational());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Rational());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

}  // namespace

std::vector<std::int64_t> cyclotomic_polynomial(int n) {
  if (n < 1) throw InvalidArgument("cyclotomic order must be positive");
  IntPoly p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d == 0) p = divide_exact(std::move(p), cyclotomic_polynomial(d));
  }
  return p;
}

CyclotomicField CyclotomicField::make(int order) {
  if (order < 1) throw InvalidArgument("cyclotomic order must be positive, got " + std::to_string(order));
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto& slot = registry()[order];
  if (!slot) {
    auto d = std::make_unique<detail::FieldData>();
    d->order = order;
    d->phi = cyclotomic_polynomial(order);
    d->degree = static_cast<int>(d->phi.size()) - 1;
    slot = std::move(d);
  }
  return CyclotomicField(slot.get());
}

int CyclotomicField::order() const noexcept { return data_->order; }
int CyclotomicField::degree() const noexcept { return data_->degree; }
const std::vector<std::int64_t>& CyclotomicField::minimal_poly() const noexcept { return data_->phi; }

Element CyclotomicField::zero() const { return Element(*this, Element::Coeffs(degree())); }

Element CyclotomicField::one() const { return from_int(1); }

Element CyclotomicField::from_int(std::int64_t v) const {
  Element::Coeffs c(degree());
  c[0] = Rational(v);
  return Element(*this, std::move(c));
}

Element CyclotomicField::from_rational(const Rational& r) const {
  Element::Coeffs c(degree());
  c[0] = r;
  return Element(*this, std::move(c));
}

Element CyclotomicField::zeta() const {
  if (degree() == 1) return from_int(-data_->phi[0]);  // z - 1 or z + 1
  Element::Coeffs c(degree());
  c[1] = Rational(1);
  return Element(*this, std::move(c));
}

Element CyclotomicField::from_coeffs(std::vector<Rational> coeffs) const {
  // Reduce an arbitrary-length coefficient list modulo Phi_n.
  Element acc = zero();
  Element power = one();
  const Element z = zeta();
  for (const Rational& c : coeffs) {
    if (!c.is_zero()) acc += power * c;
    power *= z;
  }
  return acc;
}

Element CyclotomicField::parse(std::string_view text) const {
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("scalar '" + std::string(text) + "': " + msg + " at position " + std::to_string(pos), pos);
  };
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_int = [&]() -> std::string {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    return std::string(text.substr(start, pos - start));
  };

  std::vector<Rational> coeffs;
  skip_ws();
  if (pos == text.size()) throw fail("empty scalar");
  bool first = true;
  while (true) {
    skip_ws();
    if (pos == text.size()) break;
    int sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip_ws();
    } else if (!first) {
      throw fail("expected '+' or '-'");
    }
    first = false;
    Rational coef(1);
    bool have_coef = false;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::string num = read_int();
      std::string den = "1";
      if (pos < text.size() && text[pos] == '/') {
        ++pos;
        den = read_int();
        if (den.empty()) throw fail("expected denominator");
      }
      mpz_class dz(den);
      if (dz == 0) throw fail("zero denominator");
      coef = Rational(mpq_class(mpz_class(num), dz));
      have_coef = true;
      skip_ws();
    }
    std::size_t power = 0;
    bool have_z = false;
    if (pos < text.size() && text[pos] == '*') {
      if (!have_coef) throw fail("'*' without coefficient");
      ++pos;
      skip_ws();
      if (pos == text.size() || text[pos] != 'z') throw fail("expected 'z' after '*'");
    }
    if (pos < text.size() && text[pos] == 'z') {
      ++pos;
      have_z = true;
      power = 1;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        std::string e = read_int();
        if (e.empty()) throw fail("expected exponent");
        if (e.size() > 6) throw fail("exponent too large");
        power = std::stoul(e);
      }
    }
    if (!have_coef && !have_z) throw fail("expected a term");
    if (coeffs.size() <= power) coeffs.resize(power + 1);
    coeffs[power] += sign > 0 ? coef : -coef;
  }
  return from_coeffs(std::move(coeffs));
}

Element::Element(CyclotomicField f, Coeffs c) : field_(f.data()), c_(std::move(c)) {
  if (static_cast<int>(c_.size()) != field_->degree) {
    throw InvalidArgument("coefficient vector length does not match field degree");
  }
}

void Element::check_same(const Element& b) const {
  if (field_ != b.field_ || field_ == nullptr) {
    throw FieldMismatch("operands belong to different cyclotomic fields");
  }
}

bool Element::is_zero() const noexcept {
  for (const Rational& r : c_) {
    if (!r.is_zero()) return false;
  }
  return true;
}

bool Element::is_one() const noexcept {
  if (c_.empty() || !c_[0].is_one()) return false;
  for (std::size_t i = 1; i < c_.size(); ++i) {
    if (!c_[i].is_zero()) return false;
  }
  return true;
}

bool Element::is_rational() const noexcept {
  for (std::size_t i = 1; i < c_.size(); ++i) {
    if (!c_[i].is_zero()) return false;
  }
  return true;
}

Element Element::operator-() const {
  Element r = *this;
  for (Rational& x : r.c_) x = -x;
  return r;
}

Element& Element::operator+=(const Element& b) {
  check_same(b);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!b.c_[i].is_zero()) c_[i] += b.c_[i];
  }
  return *this;
}

Element& Element::operator-=(const Element& b) {
  check_same(b);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!b.c_[i].is_zero()) c_[i] -= b.c_[i];
  }
  return *this;
}

Element operator+(const Element& a, const Element& b) {
  Element r = a;
  r += b;
  return r;
}

Element operator-(const Element& a, const Element& b) {
  Element r = a;
  r -= b;
  return r;
}

Element operator*(const Element& a, const Element& b) {
  a.check_same(b);
  const auto& phi = a.field_->phi;
  const std::size_t d = a.c_.size();
  if (d == 1) {
    Element r = a;
    r.c_[0] = a.c_[0] * b.c_[0];
    return r;
  }
  boost::container::small_vector<Rational, 12> p(2 * d - 1);
  for (std::size_t i = 0; i < d; ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (b.c_[j].is_zero()) continue;
      p[i + j] += a.c_[i] * b.c_[j];
    }
  }
  for (std::size_t k = 2 * d - 2; k >= d; --k) {
    if (p[k].is_zero()) continue;
    for (std::size_t i = 0; i < d; ++i) {
      if (phi[i] != 0) p[k - d + i] -= p[k] * Rational(phi[i]);
    }
  }
  Element r;
  r.field_ = a.field_;
  r.c_.assign(std::make_move_iterator(p.begin()), std::make_move_iterator(p.begin() + static_cast<std::ptrdiff_t>(d)));
  return r;
}

Element operator*(const Element& a, const Rational& s) {
  Element r = a;
  for (Rational& x : r.c_) {
    if (!x.is_zero()) x *= s;
  }
  return r;
}

Element Element::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero field element");
  if (c_.size() == 1) {
    Element r = *this;
    r.c_[0] = c_[0].inverse();
    return r;
  }
  // Extended Euclid in Q[z] against Phi_n.
  QPoly r0(field_->phi.begin(), field_->phi.end());
  QPoly r1(c_.begin(), c_.end());
  trim(r1);
  QPoly s0, s1{Rational(1)};
  while (!(r1.size() == 1)) {
    auto [q, rem] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(rem);
    QPoly s2 = sub(s0, mul(q, s1));
    s0 = std::move(s1);
    s1 = std::move(s2);
    if (r1.empty()) throw std::logic_error("element shares a factor with the cyclotomic polynomial");
  }
  // r1 is a nonzero constant c with s1 * a == c (mod Phi).
  const Rational cinv = r1[0].inverse();
  for (Rational& x : s1) x *= cinv;
  return field().from_coeffs(std::move(s1));
}

Element operator/(const Element& a, const Element& b) {
  a.check_same(b);
  return a * b.inverse();
}

Element Element::conj() const {
  CyclotomicField f = field();
  const int n = f.order();
  Element acc = f.zero();
  const Element zinv = f.zeta().pow(n - 1);
  Element power = f.one();
  for (const Rational& c : c_) {
    if (!c.is_zero()) acc += power * c;
    power *= zinv;
  }
  return acc;
}

Element Element::pow(std::int64_t k) const {
  if (k < 0) return inverse().pow(-k);
  Element result = field().one();
  Element base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return result;
}

bool operator==(const Element& a, const Element& b) {
  a.check_same(b);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] != b.c_[i]) return false;
  }
  return true;
}

std::string Element::str() const {
  std::string out;
  for (std::size_t k = c_.size(); k-- > 0;) {
    const Rational& c = c_[k];
    if (c.is_zero()) continue;
    const bool neg = c.sign() < 0;
    const Rational mag = neg ? -c : c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? "-" : "+";
    }
    if (k == 0) {
      out += mag.str();
      continue;
    }
    if (!mag.is_one()) out += mag.str() + "*";
    out += "z";
    if (k > 1) out += "^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

std::size_t Element::hash() const noexcept {
  std::size_t h = 0x51ed270b27d1c3b5ULL;
  for (const Rational& r : c_) h = (h ^ r.hash()) * 0x100000001b3ULL;
  return h;
}

}  // namespace hyperarr
