#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tvlat/errors.hpp"
#include "tvlat/poly.hpp"

namespace tvlat {

// Dense row-major matrix over a field. Every matrix carries the zero of
// its field so that empty shapes (0 x n and n x 0 both occur in lattice
// code) still know their coefficient context.
template <FieldScalar F>
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, F zero)
      : rows_(rows), cols_(cols), zero_(std::move(zero)), e_(rows * cols, zero_) {}

  static Matrix from_rows(const std::vector<std::vector<F>>& rows, F zero, std::size_t cols) {
    Matrix m(rows.size(), cols, std::move(zero));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw error(errc::dimension_mismatch, "row length does not match column count");
      for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix identity(std::size_t n, F zero) {
    const F one = unit_like(zero);
    Matrix m(n, n, std::move(zero));
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = one;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const F& zero() const { return zero_; }

  F& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const F& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  std::vector<F> row(std::size_t i) const {
    return std::vector<F>(e_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          e_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw error(errc::dimension_mismatch, "matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_, a.zero_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const F& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          c.at(i, j) = c.at(i, j) + aik * b.at(k, j);
      }
    return c;
  }

  // Stacks rows of `other` below this matrix; column counts must agree.
  Matrix stacked(const Matrix& other) const {
    if (cols_ != other.cols_)
      throw error(errc::dimension_mismatch, "stacking matrices of different widths");
    Matrix s(rows_ + other.rows_, cols_, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) s.at(i, j) = at(i, j);
    for (std::size_t i = 0; i < other.rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) s.at(rows_ + i, j) = other.at(i, j);
    return s;
  }

  Matrix columns(std::size_t from, std::size_t to) const {
    Matrix s(rows_, to - from, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = from; j < to; ++j) s.at(i, j - from) = at(i, j);
    return s;
  }

 private:
  std::size_t rows_, cols_;
  F zero_;
  std::vector<F> e_;
};

// In-place Gauss-Jordan reduction to reduced row echelon form with the
// deterministic pivot rule (first nonzero entry in column order). Returns
// the pivot column indices. Exact arithmetic throughout; inverting a pivot
// can surface a zero-divisor error when the coefficient ring is not a
// field, which callers propagate.
template <FieldScalar F>
std::vector<std::size_t> rref_in_place(Matrix<F>& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(row, j), m.at(sel, j));
    const F inv = m.at(row, col).inverse();
    for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) = m.at(row, j) * inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m.at(i, col).is_zero()) continue;
      const F factor = m.at(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        m.at(i, j) = m.at(i, j) - factor * m.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <FieldScalar F>
std::pair<Matrix<F>, std::vector<std::size_t>> rref(Matrix<F> m) {
  std::vector<std::size_t> pivots = rref_in_place(m);
  return {std::move(m), std::move(pivots)};
}

}  // namespace tvlat
