#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hyperarr {

// Integer polynomial in t, coefficients lowest degree first. Used for characteristic polynomials.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<std::int64_t> coeffs);
  static Poly monomial(std::int64_t c, std::size_t k);
  // prod (t - r) over roots.
  static Poly from_roots(const std::vector<std::int64_t>& roots);

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  std::int64_t coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0; }
  const std::vector<std::int64_t>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  std::int64_t eval(std::int64_t t) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) = default;

  // Exact quotient by a monic divisor, or nullopt if the remainder is nonzero.
  std::optional<Poly> divide_exact(const Poly& monic) const;
  bool divisible_by(const Poly& monic) const { return divide_exact(monic).has_value(); }

  // Integer roots with multiplicity if the polynomial splits into linear factors
  // with roots in [0, bound]; nullopt otherwise. Roots ascending.
  std::optional<std::vector<std::int64_t>> integer_roots(std::int64_t bound) const;

  // Factored text such as "(t-1)(t-13)(t-17)(t-29)", "t(t-1)^2" or "(t-1)(t^2-3t+3)".
  std::string str() const;
  // Expanded text, highest degree first.
  std::string expanded() const;

 private:
  void trim();
  std::vector<std::int64_t> c_;
};

}  // namespace hyperarr
