#pragma once

#include <boost/container/small_vector.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hyperarr/rational.hpp"

namespace hyperarr {

namespace detail {
struct FieldData;
}

class Element;

// The cyclotomic field Q(zeta_n), represented as Q[z] / Phi_n(z).
//
// Fields are interned: every call to make(n) with the same n returns a handle
// to the same immutable data, so handles compare by identity and are cheap to
// copy.
class CyclotomicField {
 public:
  static CyclotomicField make(int order);

  int order() const noexcept;
  int degree() const noexcept;
  // Coefficients of Phi_n, lowest degree first; monic.
  const std::vector<std::int64_t>& minimal_poly() const noexcept;

  Element zero() const;
  Element one() const;
  Element zeta() const;
  Element from_int(std::int64_t v) const;
  Element from_rational(const Rational& r) const;
  Element from_coeffs(std::vector<Rational> coeffs) const;

  // Parses the scalar grammar `[+-][rat][*]z[^k]` summed; throws ParseError.
  Element parse(std::string_view text) const;

  const detail::FieldData* data() const noexcept { return data_; }
  friend bool operator==(CyclotomicField a, CyclotomicField b) noexcept { return a.data_ == b.data_; }
  friend bool operator!=(CyclotomicField a, CyclotomicField b) noexcept { return a.data_ != b.data_; }

 private:
  explicit CyclotomicField(const detail::FieldData* d) : data_(d) {}
  const detail::FieldData* data_;
  friend class Element;
};

// An element of a cyclotomic field: a polynomial in zeta of degree < phi(n).
class Element {
 public:
  using Coeffs = boost::container::small_vector<Rational, 6>;

  Element() = default;  // detached zero; only meaningful after assignment
  Element(CyclotomicField f, Coeffs c);

  CyclotomicField field() const noexcept { return CyclotomicField(field_); }
  const Coeffs& coeffs() const noexcept { return c_; }

  bool is_zero() const noexcept;
  bool is_one() const noexcept;
  // True when the element lies in Q; constant_term() is then its value.
  bool is_rational() const noexcept;
  const Rational& constant_term() const { return c_[0]; }

  Element operator-() const;
  Element inverse() const;
  // Image under zeta -> zeta^-1 (complex conjugation).
  Element conj() const;
  Element pow(std::int64_t k) const;

  friend Element operator+(const Element& a, const Element& b);
  friend Element operator-(const Element& a, const Element& b);
  friend Element operator*(const Element& a, const Element& b);
  friend Element operator/(const Element& a, const Element& b);
  Element& operator+=(const Element& b);
  Element& operator-=(const Element& b);
  Element& operator*=(const Element& b) { return *this = *this * b; }
  Element& operator/=(const Element& b) { return *this = *this / b; }
  friend Element operator*(const Element& a, const Rational& r);

  friend bool operator==(const Element& a, const Element& b);
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

  // Canonical text: terms by strictly decreasing power, explicit '*', "0" for zero.
  std::string str() const;
  std::size_t hash() const noexcept;

 private:
  void check_same(const Element& b) const;
  const detail::FieldData* field_ = nullptr;
  Coeffs c_;
};

// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
std::vector<std::int64_t> cyclotomic_polynomial(int n);

}  // namespace hyperarr

template <>
struct std::hash<hyperarr::Element> {
  std::size_t operator()(const hyperarr::Element& e) const noexcept { return e.hash(); }
};
