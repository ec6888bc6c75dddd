#include "hyperarr/rational.hpp"

#include <cctype>
#include <functional>
#include <numeric>

#include "hyperarr/errors.hpp"

namespace hyperarr {
namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr i128 kMax = static_cast<i128>(INT64_MAX);
constexpr i128 kMin = -static_cast<i128>(INT64_MAX);  // INT64_MIN stays big so negation is safe

bool fits(i128 v) { return v >= kMin && v <= kMax; }

u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
  if ((a >> 64) == 0 && (b >> 64) == 0) {
    return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  }
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class to_mpz(i128 v) {
  const bool neg = v < 0;
  u128 u = uabs(v);
  mpz_class hi(static_cast<unsigned long>(u >> 64));
  mpz_class lo(static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFULL));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw DivisionByZero("rational with zero denominator");
  *this = from_wide(n, d);
}

Rational::Rational(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  assign_big(std::move(c));
}

void Rational::assign_big(mpq_class q) {
  const mpz_class& n = q.get_num();
  const mpz_class& d = q.get_den();
  if (n.fits_slong_p() && d.fits_slong_p() && n.get_si() != INT64_MIN) {
    num_ = n.get_si();
    den_ = d.get_si();
    big_.reset();
  } else {
    num_ = 0;
    den_ = 1;
    big_ = std::make_unique<mpq_class>(std::move(q));
  }
}

Rational Rational::from_wide(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  u128 g = gcd128(uabs(n), static_cast<u128>(d));
  if (g > 1) {
    n /= static_cast<i128>(g);
    d /= static_cast<i128>(g);
  }
  Rational r;
  if (fits(n) && fits(d)) {
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
  } else {
    mpq_class q(to_mpz(n), to_mpz(d));
    r.assign_big(std::move(q));
  }
  return r;
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

bool Rational::is_integer() const noexcept { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const noexcept {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

Rational Rational::operator-() const {
  if (!big_) {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  return Rational(mpq_class(-*big_));
}

Rational Rational::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero");
  if (!big_) return from_wide(den_, num_);
  return Rational(mpq_class(1 / *big_));
}

Rational operator+(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == 1 && b.den_ == 1) {
      std::int64_t s;
      if (!__builtin_add_overflow(a.num_, b.num_, &s) && s != INT64_MIN) {
        Rational r;
        r.num_ = s;
        return r;
      }
    }
    if (b.num_ == 0) return a;
    if (a.num_ == 0) return b;
    const i128 n = static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_;
    const i128 d = static_cast<i128>(a.den_) * b.den_;
    return Rational::from_wide(n, d);
  }
  return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
}

Rational operator-(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == 1 && b.den_ == 1) {
      std::int64_t s;
      if (!__builtin_sub_overflow(a.num_, b.num_, &s) && s != INT64_MIN) {
        Rational r;
        r.num_ = s;
        return r;
      }
    }
    if (b.num_ == 0) return a;
    const i128 n = static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_;
    const i128 d = static_cast<i128>(a.den_) * b.den_;
    return Rational::from_wide(n, d);
  }
  return Rational(mpq_class(a.to_mpq() - b.to_mpq()));
}

Rational operator*(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.num_ == 0 || b.num_ == 0) return Rational();
    if (a.den_ == 1 && b.den_ == 1) {
      std::int64_t p;
      if (!__builtin_mul_overflow(a.num_, b.num_, &p) && p != INT64_MIN) {
        Rational r;
        r.num_ = p;
        return r;
      }
    }
    const i128 n = static_cast<i128>(a.num_) * b.num_;
    const i128 d = static_cast<i128>(a.den_) * b.den_;
    return Rational::from_wide(n, d);
  }
  return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw DivisionByZero("rational division by zero");
  if (!a.big_ && !b.big_) {
    const i128 n = static_cast<i128>(a.num_) * b.den_;
    const i128 d = static_cast<i128>(a.den_) * b.num_;
    return Rational::from_wide(n, d);
  }
  return Rational(mpq_class(a.to_mpq() / b.to_mpq()));
}

bool operator==(const Rational& a, const Rational& b) noexcept {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical forms differ in representation only when values differ
}

bool operator<(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
  }
  return a.to_mpq() < b.to_mpq();
}

std::string Rational::str() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto bad = [&] { return ParseError("malformed rational '" + std::string(text) + "'", 0); };
  if (text.empty()) throw bad();
  std::size_t slash = text.find('/');
  auto digits_ok = [](std::string_view s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
  };
  std::string_view ns = text.substr(0, slash);
  std::string_view ds = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!digits_ok(ns) || !digits_ok(ds) || ds[0] == '-' || ds[0] == '+') throw bad();
  std::string nstr(ns[0] == '+' ? ns.substr(1) : ns);
  mpz_class n(nstr), d{std::string(ds)};
  if (d == 0) throw DivisionByZero("rational with zero denominator");
  return Rational(mpq_class(n, d));
}

std::size_t Rational::hash() const noexcept {
  if (!big_) {
    std::size_t h = std::hash<std::int64_t>{}(num_);
    return h ^ (std::hash<std::int64_t>{}(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
  return std::hash<std::string>{}(big_->get_str());
}

}  // namespace hyperarr
