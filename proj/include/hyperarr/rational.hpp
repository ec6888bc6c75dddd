#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace hyperarr {

// Exact rational number, always in lowest terms with a positive denominator.
//
// Values whose numerator and denominator fit in a signed 64-bit word are kept
// inline; anything larger is promoted to a GMP rational and demoted again as
// soon as it fits. Arithmetic on the inline form goes through 128-bit
// intermediates, so the common case never allocates.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n == INT64_MIN ? 0 : n) {  // NOLINT(google-explicit-constructor)
    if (n == INT64_MIN) assign_big(mpq_class(static_cast<long>(n)));
  }
  Rational(std::int64_t n, std::int64_t d);
  explicit Rational(const mpq_class& q);

  Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
  }
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      num_ = o.num_;
      den_ = o.den_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;
  ~Rational() = default;

  bool is_zero() const noexcept { return !big_ && num_ == 0; }
  bool is_one() const noexcept { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const noexcept;
  bool is_small() const noexcept { return !big_; }
  int sign() const noexcept;

  Rational operator-() const;
  Rational inverse() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept;
  friend bool operator!=(const Rational& a, const Rational& b) noexcept { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);

  // "p" for integers, "p/q" otherwise.
  std::string str() const;
  // Accepts "p" or "p/q" with an optional leading sign.
  static Rational parse(std::string_view text);

  mpq_class to_mpq() const;
  std::size_t hash() const noexcept;

 private:
  static Rational from_wide(__int128 n, __int128 d);
  void assign_big(mpq_class q);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

}  // namespace hyperarr

template <>
struct std::hash<hyperarr::Rational> {
  std::size_t operator()(const hyperarr::Rational& r) const noexcept { return r.hash(); }
};
