#pragma once

#include <cstddef>
#include <vector>

#include "hyperarr/field.hpp"

namespace hyperarr {

using Vec = std::vector<Element>;

// Dense matrix over one cyclotomic field, row-major.
class Matrix {
 public:
  Matrix(CyclotomicField f, std::size_t rows, std::size_t cols);
  static Matrix from_rows(CyclotomicField f, std::size_t cols, const std::vector<Vec>& rows);
  static Matrix identity(CyclotomicField f, std::size_t n);

  CyclotomicField field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Element& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Element& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Vec row(std::size_t r) const;
  std::vector<Vec> row_list() const;

  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  CyclotomicField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Element> data_;
};

struct RrefResult {
  Matrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

// Leftmost pivot per column, first nonzero row in index order as the pivot row.
RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);
// Basis of {x : m x = 0}, one row per free column in increasing column order.
Matrix kernel(const Matrix& m);

Element dot(const Vec& a, const Vec& b);
bool is_zero_vec(const Vec& v);
// Scales v so that its first nonzero entry is 1. Returns false for the zero vector.
bool normalize_leading_one(Vec& v);
std::size_t rank_of_rows(CyclotomicField f, std::size_t cols, const std::vector<Vec>& rows);

}  // namespace hyperarr
