#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hyperarr/errors.hpp"
#include "hyperarr/field.hpp"
#include "hyperarr/matrix.hpp"

using namespace hyperarr;

namespace {

Element random_element(CyclotomicField f, std::mt19937_64& rng, int span = 9) {
  std::uniform_int_distribution<int> num(-span, span);
  std::uniform_int_distribution<int> den(1, 4);
  std::vector<Rational> c;
  for (int i = 0; i < f.degree(); ++i) c.emplace_back(num(rng), den(rng));
  return f.from_coeffs(std::move(c));
}

Element gauss_sum_7() {
  auto f = CyclotomicField::make(7);
  return f.parse("z+z^2-z^3+z^4-z^5-z^6");
}

}  // namespace

TEST_CASE("rational normal form and overflow promotion") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(-1, 2).str() == "-1/2");
  Rational big(INT64_MAX);
  Rational sq = big * big;
  CHECK_FALSE(sq.is_small());
  CHECK(sq / big == big);
  CHECK((sq / big).is_small());
  Rational m(INT64_MIN);
  CHECK(-(-m) == m);
  CHECK(Rational::parse("-10/4") == Rational(-5, 2));
  CHECK_THROWS_AS(Rational::parse("1/0"), DivisionByZero);
  CHECK_THROWS_AS(Rational::parse("x"), ParseError);
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(CyclotomicField::make(4).minimal_poly() == std::vector<std::int64_t>{1, 0, 1});
  CHECK(CyclotomicField::make(3).minimal_poly() == std::vector<std::int64_t>{1, 1, 1});
  CHECK(CyclotomicField::make(7).degree() == 6);
  CHECK(CyclotomicField::make(7).minimal_poly() == std::vector<std::int64_t>(7, 1));
  CHECK(CyclotomicField::make(12).minimal_poly() == std::vector<std::int64_t>{1, 0, -1, 0, 1});
  CHECK(CyclotomicField::make(1).degree() == 1);
  CHECK(CyclotomicField::make(2).degree() == 1);
  CHECK(CyclotomicField::make(2).zeta() == CyclotomicField::make(2).from_int(-1));
  CHECK(CyclotomicField::make(5) == CyclotomicField::make(5));
}

TEST_CASE("field arithmetic examples") {
  auto q4 = CyclotomicField::make(4);
  auto i = q4.zeta();
  CHECK(i * i == q4.from_int(-1));
  auto q3 = CyclotomicField::make(3);
  auto z = q3.zeta();
  CHECK((q3.one() + z + z * z).is_zero());
  CHECK((q4.one() + i).inverse() == (q4.one() - i) * Rational(1, 2));
  auto s = gauss_sum_7();
  CHECK(s * s == CyclotomicField::make(7).from_int(-7));
  CHECK(i.conj() == -i);
  CHECK(z.conj() == z * z);
  CHECK(i.pow(-1) == -i);
  CHECK(i.pow(4).is_one());
}

TEST_CASE("field errors") {
  auto q4 = CyclotomicField::make(4);
  auto q3 = CyclotomicField::make(3);
  CHECK_THROWS_AS(q4.zero().inverse(), DivisionByZero);
  CHECK_THROWS_AS(q4.one() + q3.one(), FieldMismatch);
  CHECK_THROWS_AS(q4.one() * q3.one(), FieldMismatch);
  CHECK_THROWS_AS(CyclotomicField::make(0), InvalidArgument);
}

TEST_CASE("scalar parse and format") {
  auto q7 = CyclotomicField::make(7);
  auto e = q7.parse("1/2*z^2-1/2");
  std::vector<Rational> expect{Rational(-1, 2), 0, Rational(1, 2), 0, 0, 0};
  for (int k = 0; k < 6; ++k) CHECK(e.coeffs()[k] == expect[k]);
  CHECK(e.str() == "1/2*z^2-1/2");
  auto q4 = CyclotomicField::make(4);
  CHECK(q4.parse("z^4").is_one());
  CHECK(q4.parse("0").is_zero());
  CHECK(q4.parse("0").str() == "0");
  CHECK(q4.parse("-z").str() == "-z");
  CHECK(q4.parse(" 2 * z + 3/6 ").str() == "2*z+1/2");
  CHECK(q4.parse("-2/3*z^2").str() == "2/3");
  CHECK_THROWS_AS(q4.parse(""), ParseError);
  CHECK_THROWS_AS(q4.parse("1/0"), ParseError);
  CHECK_THROWS_AS(q4.parse("z z"), ParseError);
  CHECK_THROWS_AS(q4.parse("3*"), ParseError);
  try {
    q4.parse("1+?");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.position() == 2);
  }
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(0);
  for (int n : {3, 4, 7, 12}) {
    auto f = CyclotomicField::make(n);
    for (int trial = 0; trial < 250; ++trial) {
      auto a = random_element(f, rng), b = random_element(f, rng), c = random_element(f, rng);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
      if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
      CHECK(f.parse(a.str()) == a);
      CHECK((a * b).conj() == a.conj() * b.conj());
    }
  }
}

TEST_CASE("rref, rank and kernel") {
  auto q4 = CyclotomicField::make(4);
  CHECK(rank(Matrix::identity(q4, 3)) == 3);
  auto one = q4.one(), zero = q4.zero();
  Vec r{one, q4.zeta(), zero};
  CHECK(rank(Matrix::from_rows(q4, 3, {r, r})) == 1);
  Matrix m = Matrix::from_rows(q4, 4, {{one, zero, zero, zero}, {zero, one, zero, zero}, {one, one, zero, zero}});
  CHECK(rank(m) == 2);
  CHECK(kernel(Matrix(q4, 1, 3)).rows() == 3);
  Matrix k = kernel(Matrix::from_rows(q4, 3, {{one, zero, zero}}));
  CHECK(k.rows() == 2);
  CHECK(k.row(0) == Vec{zero, one, zero});
  CHECK(k.row(1) == Vec{zero, zero, one});
  CHECK(kernel(Matrix::identity(q4, 3)).rows() == 0);
}

TEST_CASE("rref idempotent and rank-nullity on random matrices") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> dim(1, 5);
  std::bernoulli_distribution sparse(0.4);
  for (int n : {3, 4, 7}) {
    auto f = CyclotomicField::make(n);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t rows = dim(rng), cols = dim(rng);
      Matrix m(f, rows, cols);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
          if (!sparse(rng)) m.at(i, j) = random_element(f, rng, 3);
      if (rows > 1 && sparse(rng)) {
        for (std::size_t j = 0; j < cols; ++j) m.at(rows - 1, j) = m.at(0, j) + m.at(rows - 2, j);
      }
      RrefResult r = rref(m);
      CHECK(rref(r.reduced).reduced == r.reduced);
      Matrix k = kernel(m);
      CHECK(r.rank + k.rows() == cols);
      for (std::size_t i = 0; i < k.rows(); ++i)
        for (std::size_t j = 0; j < rows; ++j) CHECK(dot(m.row(j), k.row(i)).is_zero());
    }
  }
}
