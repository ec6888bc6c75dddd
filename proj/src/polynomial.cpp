#include "hyperarr/polynomial.hpp"

#include <stdexcept>

namespace hyperarr {
namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("polynomial coefficient overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("polynomial coefficient overflow");
  return r;
}

}  // namespace

Poly::Poly(std::vector<std::int64_t> coeffs) : c_(std::move(coeffs)) { trim(); }

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::monomial(std::int64_t c, std::size_t k) {
  std::vector<std::int64_t> v(k + 1, 0);
  v[k] = c;
  return Poly(std::move(v));
}

Poly Poly::from_roots(const std::vector<std::int64_t>& roots) {
  Poly p({1});
  for (std::int64_t r : roots) p = p * Poly({-r, 1});
  return p;
}

std::int64_t Poly::eval(std::int64_t t) const {
  std::int64_t acc = 0;
  for (std::size_t k = c_.size(); k-- > 0;) acc = checked_add(checked_mul(acc, t), c_[k]);
  return acc;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<std::int64_t> r(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = checked_add(r[i], b.c_[i]);
  return Poly(std::move(r));
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<std::int64_t> r(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = checked_add(r[i], -b.c_[i]);
  return Poly(std::move(r));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<std::int64_t> r(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = checked_add(r[i + j], checked_mul(a.c_[i], b.c_[j]));
  return Poly(std::move(r));
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.is_zero() || d.c_.back() != 1) throw std::invalid_argument("divisor must be monic");
  if (is_zero()) return Poly();
  if (c_.size() < d.c_.size()) return std::nullopt;
  std::vector<std::int64_t> rem = c_;
  std::vector<std::int64_t> q(c_.size() - d.c_.size() + 1, 0);
  const std::size_t dd = d.c_.size() - 1;
  for (std::size_t k = rem.size(); k-- > dd;) {
    const std::int64_t c = rem[k];
    if (c == 0) continue;
    q[k - dd] = c;
    for (std::size_t i = 0; i <= dd; ++i) rem[k - dd + i] = checked_add(rem[k - dd + i], -checked_mul(c, d.c_[i]));
  }
  for (std::int64_t r : rem)
    if (r != 0) return std::nullopt;
  return Poly(std::move(q));
}

std::optional<std::vector<std::int64_t>> Poly::integer_roots(std::int64_t bound) const {
  if (is_zero() || c_.back() != 1) return std::nullopt;
  std::vector<std::int64_t> roots;
  Poly p = *this;
  for (std::int64_t k = 0; k <= bound && p.degree() > 0; ++k) {
    while (p.degree() > 0) {
      auto q = p.divide_exact(Poly({-k, 1}));
      if (!q) break;
      roots.push_back(k);
      p = *q;
    }
  }
  if (p.degree() != 0) return std::nullopt;
  return roots;
}

std::string Poly::expanded() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t k = c_.size(); k-- > 0;) {
    std::int64_t c = c_[k];
    if (c == 0) continue;
    const bool neg = c < 0;
    const std::uint64_t mag = neg ? static_cast<std::uint64_t>(-(c + 1)) + 1 : static_cast<std::uint64_t>(c);
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? "-" : "+";
    }
    if (k == 0 || mag != 1) out += std::to_string(mag);
    if (k >= 1) out += "t";
    if (k >= 2) out += "^" + std::to_string(k);
  }
  return out;
}

std::string Poly::str() const {
  if (is_zero()) return "0";
  Poly p = *this;
  std::string out;
  if (p.c_.back() != 1) return expanded();
  std::size_t zeros = 0;
  while (p.degree() > 0 && p.c_[0] == 0) {
    p = *p.divide_exact(Poly({0, 1}));
    ++zeros;
  }
  if (zeros) out += zeros == 1 ? "t" : "t^" + std::to_string(zeros);
  // Integer roots divide the constant term; trial-divide by its positive and negative divisors.
  for (std::int64_t k = 1; p.degree() > 0 && k <= 1'000'000; ++k) {
    if (p.c_[0] % k != 0) continue;
    for (std::int64_t r : {k, -k}) {
      std::size_t mult = 0;
      while (p.degree() > 0) {
        auto q = p.divide_exact(Poly({-r, 1}));
        if (!q) break;
        p = *q;
        ++mult;
      }
      if (!mult) continue;
      out += "(t" + std::string(r > 0 ? "-" : "+") + std::to_string(r > 0 ? r : -r) + ")";
      if (mult > 1) out += "^" + std::to_string(mult);
    }
    if (p.degree() > 0 && k > (p.c_[0] < 0 ? -p.c_[0] : p.c_[0])) break;
  }
  if (p.degree() > 0) out += "(" + p.expanded() + ")";
  return out.empty() ? "1" : out;
}

}  // namespace hyperarr
