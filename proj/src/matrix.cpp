#include "hyperarr/matrix.hpp"

#include "hyperarr/errors.hpp"

namespace hyperarr {

Matrix::Matrix(CyclotomicField f, std::size_t rows, std::size_t cols)
    : field_(f), rows_(rows), cols_(cols), data_(rows * cols, f.zero()) {}

Matrix Matrix::from_rows(CyclotomicField f, std::size_t cols, const std::vector<Vec>& rows) {
  Matrix m(f, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw InvalidArgument("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (rows[r][c].field() != f) throw FieldMismatch("matrix entry from a different field");
      m.at(r, c) = rows[r][c];
    }
  }
  return m;
}

Matrix Matrix::identity(CyclotomicField f, std::size_t n) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f.one();
  return m;
}

Vec Matrix::row(std::size_t r) const {
  return Vec(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
             data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

std::vector<Vec> Matrix::row_list() const {
  std::vector<Vec> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

RrefResult rref(const Matrix& m) {
  Matrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && a.at(p, col).is_zero()) ++p;
    if (p == a.rows()) continue;
    if (p != row) {
      for (std::size_t c = col; c < a.cols(); ++c) std::swap(a.at(p, c), a.at(row, c));
    }
    const Element inv = a.at(row, col).inverse();
    for (std::size_t c = col; c < a.cols(); ++c) {
      if (!a.at(row, c).is_zero()) a.at(row, c) *= inv;
    }
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a.at(r, col).is_zero()) continue;
      const Element f = a.at(r, col);
      for (std::size_t c = col; c < a.cols(); ++c) {
        if (!a.at(row, c).is_zero()) a.at(r, c) -= f * a.at(row, c);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return RrefResult{std::move(a), row, std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).rank; }

Matrix kernel(const Matrix& m) {
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : r.pivots) is_pivot[p] = true;
  const std::size_t nullity = m.cols() - r.rank;
  Matrix k(m.field(), nullity, m.cols());
  std::size_t out = 0;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    k.at(out, f) = m.field().one();
    for (std::size_t i = 0; i < r.pivots.size(); ++i) {
      if (!r.reduced.at(i, f).is_zero()) k.at(out, r.pivots[i]) = -r.reduced.at(i, f);
    }
    ++out;
  }
  return k;
}

Element dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw InvalidArgument("dot product of vectors of different length");
  if (a.empty()) throw InvalidArgument("dot product of empty vectors");
  Element s = a[0].field().zero();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() || b[i].is_zero()) continue;
    s += a[i] * b[i];
  }
  return s;
}

bool is_zero_vec(const Vec& v) {
  for (const Element& e : v) {
    if (!e.is_zero()) return false;
  }
  return true;
}

bool normalize_leading_one(Vec& v) {
  std::size_t i = 0;
  while (i < v.size() && v[i].is_zero()) ++i;
  if (i == v.size()) return false;
  if (v[i].is_one()) return true;
  const Element inv = v[i].inverse();
  for (std::size_t j = i; j < v.size(); ++j) {
    if (!v[j].is_zero()) v[j] *= inv;
  }
  return true;
}

std::size_t rank_of_rows(CyclotomicField f, std::size_t cols, const std::vector<Vec>& rows) {
  if (rows.empty()) return 0;
  return rank(Matrix::from_rows(f, cols, rows));
}

}  // namespace hyperarr
