#pragma once

// Dense exact linear algebra: RREF, subspaces, kernels.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "nlie/field.hpp"

namespace nlie {

using Vector = std::vector<FieldElement>;

/// Sparse coordinate vector: (index, nonzero coefficient), indices strictly increasing.
using SparseVector = std::vector<std::pair<int, FieldElement>>;

Vector zero_vector(std::size_t n, const FieldDescriptor &d);
Vector unit_vector(std::size_t n, std::size_t i, const FieldDescriptor &d);
bool is_zero(std::span<const FieldElement> v);
Vector to_dense(const SparseVector &v, std::size_t n, const FieldDescriptor &d);
SparseVector to_sparse(std::span<const FieldElement> v);
/// acc += c * v, keeping acc sorted and free of zeros.
void axpy(SparseVector &acc, const FieldElement &c, const SparseVector &v);

class Matrix {
public:
  Matrix(std::size_t rows, std::size_t cols, const FieldDescriptor &d);
  static Matrix from_rows(const std::vector<Vector> &rows, std::size_t cols,
                          const FieldDescriptor &d);
  static Matrix identity(std::size_t n, const FieldDescriptor &d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const FieldDescriptor &field() const noexcept { return field_; }

  FieldElement &at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const FieldElement &at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<FieldElement> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const FieldElement> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Vector apply(std::span<const FieldElement> v) const;
  /// Row-stacks `below` under this matrix.
  Matrix stacked(const Matrix &below) const;
  Matrix transposed() const;

  friend bool operator==(const Matrix &, const Matrix &) = default;

private:
  std::size_t rows_, cols_;
  FieldDescriptor field_;
  std::vector<FieldElement> data_;
};

/// Reduced row echelon form with zero rows removed. Pivot = first nonzero entry.
Matrix rref(const Matrix &m);

/// Basis of {x : m x = 0}, one vector per free column.
std::vector<Vector> nullspace(const Matrix &m);

/// Row space of an RREF matrix with no zero rows; the representation is canonical.
class Subspace {
public:
  Subspace(std::size_t ambient_dim, const FieldDescriptor &d);
  static Subspace span(const std::vector<Vector> &vectors, std::size_t ambient_dim,
                       const FieldDescriptor &d);
  static Subspace full(std::size_t ambient_dim, const FieldDescriptor &d);
  static Subspace from_rref(Matrix basis);

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.rows(); }
  std::size_t codimension() const noexcept { return ambient_ - dim(); }
  const Matrix &basis() const noexcept { return basis_; }
  const std::vector<std::size_t> &pivots() const noexcept { return pivots_; }
  const FieldDescriptor &field() const noexcept { return basis_.field(); }
  bool is_zero() const noexcept { return dim() == 0; }
  bool is_full() const noexcept { return dim() == ambient_; }

  bool contains(std::span<const FieldElement> v) const;
  bool contains(const Subspace &other) const;
  /// Rows spanning the annihilator {f : f.v = 0 for all v in this}.
  Matrix annihilator() const;

  Subspace sum(const Subspace &other) const;
  /// Kernel of the stacked annihilators.
  Subspace intersection(const Subspace &other) const;

  friend bool operator==(const Subspace &a, const Subspace &b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

private:
  std::size_t ambient_;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
  void check_ambient(std::size_t n) const;
};

/// Incrementally maintained RREF basis; insert() reports whether the span grew.
class EchelonBuilder {
public:
  EchelonBuilder(std::size_t ambient_dim, const FieldDescriptor &d);
  explicit EchelonBuilder(const Subspace &start);

  bool insert(Vector v);
  /// Reduces v against the current rows in place; v becomes zero iff it was a member.
  void reduce(Vector &v) const;
  std::size_t dim() const noexcept { return rows_.size(); }
  std::size_t ambient_dim() const noexcept { return ambient_; }
  const std::vector<Vector> &rows() const noexcept { return rows_; }
  Subspace subspace() const;

private:
  std::size_t ambient_;
  FieldDescriptor field_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivot_of_row_;
};

} // namespace nlie
