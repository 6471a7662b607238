#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tvlat/errors.hpp"
#include "tvlat/matrix.hpp"

namespace tvlat {

// Linear subspace of F^n in canonical form: the basis matrix is in RREF
// with unit pivots, strictly increasing pivot columns and zero rows
// dropped. Canonicality makes equality a plain syntactic comparison and
// keeps serialized output stable. The zero subspace (no rows) and the full
// space are both ordinary values.
template <FieldScalar F>
class Subspace {
 public:
  // Row space of `gens`; rows may be dependent or zero.
  static Subspace from_generators(std::size_t ambient_dim, Matrix<F> gens) {
    if (gens.cols() != ambient_dim)
      throw error(errc::dimension_mismatch, "generator width does not match ambient dimension");
    std::vector<std::size_t> pivots = rref_in_place(gens);
    Matrix<F> basis(pivots.size(), ambient_dim, gens.zero());
    for (std::size_t i = 0; i < pivots.size(); ++i)
      for (std::size_t j = 0; j < ambient_dim; ++j) basis.at(i, j) = gens.at(i, j);
    return Subspace(ambient_dim, std::move(basis), std::move(pivots));
  }

  static Subspace zero(std::size_t ambient_dim, F zero_elem) {
    return Subspace(ambient_dim, Matrix<F>(0, ambient_dim, std::move(zero_elem)), {});
  }

  static Subspace full(std::size_t ambient_dim, F zero_elem) {
    std::vector<std::size_t> pivots(ambient_dim);
    for (std::size_t i = 0; i < ambient_dim; ++i) pivots[i] = i;
    return Subspace(ambient_dim, Matrix<F>::identity(ambient_dim, std::move(zero_elem)),
                    std::move(pivots));
  }

  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix<F>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == n_; }

  // Canonical bases make equality syntactic.
  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.n_ == b.n_ && a.basis_ == b.basis_;
  }

  // Eliminates this subspace's pivot coordinates from v; the result is the
  // canonical representative of v modulo the subspace. v lies in the
  // subspace iff the residual is zero.
  std::vector<F> reduce(std::vector<F> v) const {
    if (v.size() != n_) throw error(errc::dimension_mismatch, "vector length mismatch");
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      const F c = v[pivots_[i]];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < n_; ++j) v[j] = v[j] - c * basis_.at(i, j);
    }
    return v;
  }

  bool contains_vector(const std::vector<F>& v) const {
    for (const F& x : reduce(v))
      if (!x.is_zero()) return false;
    return true;
  }

  bool contains(const Subspace& other) const {
    check_compatible(other);
    for (std::size_t i = 0; i < other.dim(); ++i)
      if (!contains_vector(other.basis_.row(i))) return false;
    return true;
  }

  Subspace sum(const Subspace& other) const {
    check_compatible(other);
    return from_generators(n_, basis_.stacked(other.basis_));
  }

  // Zassenhaus: reduce the block matrix [B1 B1; B2 0]; rows whose left
  // half vanished carry intersection vectors in their right half.
  Subspace intersect(const Subspace& other) const {
    check_compatible(other);
    const F z = basis_.zero();
    Matrix<F> block(dim() + other.dim(), 2 * n_, z);
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        block.at(i, j) = basis_.at(i, j);
        block.at(i, n_ + j) = basis_.at(i, j);
      }
    for (std::size_t i = 0; i < other.dim(); ++i)
      for (std::size_t j = 0; j < n_; ++j) block.at(dim() + i, j) = other.basis_.at(i, j);
    rref_in_place(block);
    std::vector<std::vector<F>> gens;
    for (std::size_t i = 0; i < block.rows(); ++i) {
      bool left_zero = true;
      for (std::size_t j = 0; j < n_ && left_zero; ++j)
        if (!block.at(i, j).is_zero()) left_zero = false;
      if (!left_zero) continue;
      std::vector<F> v;
      v.reserve(n_);
      for (std::size_t j = 0; j < n_; ++j) v.push_back(block.at(i, n_ + j));
      gens.push_back(std::move(v));
    }
    return from_generators(n_, Matrix<F>::from_rows(gens, z, n_));
  }

 private:
  Subspace(std::size_t n, Matrix<F> basis, std::vector<std::size_t> pivots)
      : n_(n), basis_(std::move(basis)), pivots_(std::move(pivots)) {}

  void check_compatible(const Subspace& other) const {
    if (n_ != other.n_)
      throw error(errc::dimension_mismatch, "subspaces of different ambient dimension");
  }

  std::size_t n_;
  Matrix<F> basis_;
  std::vector<std::size_t> pivots_;
};

// Canonical basis of the left kernel {c : c * M = 0} of an r x n matrix,
// as a subspace of F^r. Reduce [M | I]; rows whose M-part vanished have
// their I-part in the kernel, and together they span it.
template <FieldScalar F>
Subspace<F> left_kernel(const Matrix<F>& m) {
  const F z = m.zero();
  const std::size_t r = m.rows(), n = m.cols();
  Matrix<F> aug(r, n + r, z);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = unit_like(z);
  }
  rref_in_place(aug);
  std::vector<std::vector<F>> gens;
  for (std::size_t i = 0; i < r; ++i) {
    bool m_zero = true;
    for (std::size_t j = 0; j < n && m_zero; ++j)
      if (!aug.at(i, j).is_zero()) m_zero = false;
    if (!m_zero) continue;
    std::vector<F> c;
    c.reserve(r);
    for (std::size_t j = 0; j < r; ++j) c.push_back(aug.at(i, n + j));
    gens.push_back(std::move(c));
  }
  return Subspace<F>::from_generators(r, Matrix<F>::from_rows(gens, z, r));
}

}  // namespace tvlat
