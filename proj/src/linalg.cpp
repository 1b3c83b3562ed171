#include "nlie/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace nlie {

Vector zero_vector(std::size_t n, const FieldDescriptor &d) {
  return Vector(n, FieldElement::zero(d));
}

Vector unit_vector(std::size_t n, std::size_t i, const FieldDescriptor &d) {
  Vector v = zero_vector(n, d);
  v.at(i) = FieldElement::one(d);
  return v;
}

bool is_zero(std::span<const FieldElement> v) {
  return std::all_of(v.begin(), v.end(), [](const FieldElement &x) { return x.is_zero(); });
}

Vector to_dense(const SparseVector &v, std::size_t n, const FieldDescriptor &d) {
  Vector out = zero_vector(n, d);
  for (const auto &[i, c] : v) out.at(static_cast<std::size_t>(i)) = c;
  return out;
}

SparseVector to_sparse(std::span<const FieldElement> v) {
  SparseVector out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) out.emplace_back(static_cast<int>(i), v[i]);
  return out;
}

void axpy(SparseVector &acc, const FieldElement &c, const SparseVector &v) {
  if (c.is_zero() || v.empty()) return;
  SparseVector out;
  out.reserve(acc.size() + v.size());
  std::size_t a = 0, b = 0;
  while (a < acc.size() || b < v.size()) {
    if (b == v.size() || (a < acc.size() && acc[a].first < v[b].first)) {
      out.push_back(std::move(acc[a++]));
    } else if (a == acc.size() || v[b].first < acc[a].first) {
      out.emplace_back(v[b].first, c * v[b].second);
      ++b;
    } else {
      FieldElement s = acc[a].second + c * v[b].second;
      if (!s.is_zero()) out.emplace_back(acc[a].first, std::move(s));
      ++a;
      ++b;
    }
  }
  acc = std::move(out);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, const FieldDescriptor &d)
    : rows_(rows), cols_(cols), field_(d), data_(rows * cols, FieldElement::zero(d)) {}

Matrix Matrix::from_rows(const std::vector<Vector> &rows, std::size_t cols,
                         const FieldDescriptor &d) {
  Matrix m(rows.size(), cols, d);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionMismatch("row length differs from column count");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!(rows[r][c].descriptor() == d)) throw ConfigurationError("matrix entry over wrong field");
      m.at(r, c) = rows[r][c];
    }
  }
  return m;
}

Matrix Matrix::identity(std::size_t n, const FieldDescriptor &d) {
  Matrix m(n, n, d);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = FieldElement::one(d);
  return m;
}

Vector Matrix::apply(std::span<const FieldElement> v) const {
  if (v.size() != cols_) throw DimensionMismatch("matrix-vector size mismatch");
  Vector out = zero_vector(rows_, field_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (!at(r, c).is_zero() && !v[c].is_zero()) out[r] += at(r, c) * v[c];
  return out;
}

Matrix Matrix::stacked(const Matrix &below) const {
  if (below.cols_ != cols_) throw DimensionMismatch("stacking matrices of different widths");
  Matrix m(rows_ + below.rows_, cols_, field_);
  std::copy(data_.begin(), data_.end(), m.data_.begin());
  std::copy(below.data_.begin(), below.data_.end(),
            m.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_, field_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

namespace {

// In-place Gauss-Jordan; returns pivot columns, rows [0, rank) hold the RREF.
std::vector<std::size_t> gauss_jordan(Matrix &m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && m.at(sel, c).is_zero()) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m.at(sel, k), m.at(r, k));
    FieldElement inv = m.at(r, c).inverse();
    for (std::size_t k = c; k < m.cols(); ++k)
      if (!m.at(r, k).is_zero()) m.at(r, k) *= inv;
    for (std::size_t o = 0; o < m.rows(); ++o) {
      if (o == r || m.at(o, c).is_zero()) continue;
      FieldElement f = m.at(o, c);
      for (std::size_t k = c; k < m.cols(); ++k)
        if (!m.at(r, k).is_zero()) m.at(o, k) -= f * m.at(r, k);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

} // namespace

Matrix rref(const Matrix &m) {
  Matrix work = m;
  auto pivots = gauss_jordan(work);
  Matrix out(pivots.size(), m.cols(), m.field());
  for (std::size_t r = 0; r < pivots.size(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out.at(r, c) = work.at(r, c);
  return out;
}

std::vector<Vector> nullspace(const Matrix &m) {
  Matrix work = m;
  auto pivots = gauss_jordan(work);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v = unit_vector(m.cols(), f, m.field());
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -work.at(r, f);
    out.push_back(std::move(v));
  }
  return out;
}

Subspace::Subspace(std::size_t ambient_dim, const FieldDescriptor &d)
    : ambient_(ambient_dim), basis_(0, ambient_dim, d) {}

Subspace Subspace::from_rref(Matrix basis) {
  Subspace s(basis.cols(), basis.field());
  for (std::size_t r = 0; r < basis.rows(); ++r) {
    auto row = basis.row(r);
    auto it = std::find_if(row.begin(), row.end(), [](const FieldElement &x) { return !x.is_zero(); });
    if (it == row.end()) throw Error("Subspace::from_rref given a zero row");
    s.pivots_.push_back(static_cast<std::size_t>(it - row.begin()));
  }
  s.basis_ = std::move(basis);
  return s;
}

Subspace Subspace::span(const std::vector<Vector> &vectors, std::size_t ambient_dim,
                        const FieldDescriptor &d) {
  return from_rref(rref(Matrix::from_rows(vectors, ambient_dim, d)));
}

Subspace Subspace::full(std::size_t ambient_dim, const FieldDescriptor &d) {
  return from_rref(Matrix::identity(ambient_dim, d));
}

void Subspace::check_ambient(std::size_t n) const {
  if (n != ambient_)
    throw DimensionMismatch("ambient dimension " + std::to_string(n) + " vs " +
                            std::to_string(ambient_));
}

bool Subspace::contains(std::span<const FieldElement> v) const {
  check_ambient(v.size());
  Vector w(v.begin(), v.end());
  for (std::size_t r = 0; r < dim(); ++r) {
    const FieldElement f = w[pivots_[r]];
    if (f.is_zero()) continue;
    auto row = basis_.row(r);
    for (std::size_t c = pivots_[r]; c < ambient_; ++c)
      if (!row[c].is_zero()) w[c] -= f * row[c];
  }
  return nlie::is_zero(w);
}

bool Subspace::contains(const Subspace &other) const {
  check_ambient(other.ambient_);
  for (std::size_t r = 0; r < other.dim(); ++r)
    if (!contains(other.basis_.row(r))) return false;
  return true;
}

Matrix Subspace::annihilator() const {
  auto vecs = nullspace(basis_);
  return Matrix::from_rows(vecs, ambient_, field());
}

Subspace Subspace::sum(const Subspace &other) const {
  check_ambient(other.ambient_);
  return from_rref(rref(basis_.stacked(other.basis_)));
}

Subspace Subspace::intersection(const Subspace &other) const {
  check_ambient(other.ambient_);
  Matrix constraints = annihilator().stacked(other.annihilator());
  return span(nullspace(constraints), ambient_, field());
}

EchelonBuilder::EchelonBuilder(std::size_t ambient_dim, const FieldDescriptor &d)
    : ambient_(ambient_dim), field_(d) {}

EchelonBuilder::EchelonBuilder(const Subspace &start)
    : ambient_(start.ambient_dim()), field_(start.field()) {
  for (std::size_t r = 0; r < start.dim(); ++r) {
    auto row = start.basis().row(r);
    rows_.emplace_back(row.begin(), row.end());
    pivot_of_row_.push_back(start.pivots()[r]);
  }
}

void EchelonBuilder::reduce(Vector &v) const {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const FieldElement f = v[pivot_of_row_[r]];
    if (f.is_zero()) continue;
    const Vector &row = rows_[r];
    for (std::size_t c = 0; c < ambient_; ++c)
      if (!row[c].is_zero()) v[c] -= f * row[c];
  }
}

bool EchelonBuilder::insert(Vector v) {
  if (v.size() != ambient_) throw DimensionMismatch("echelon insert: wrong vector length");
  reduce(v);
  auto it = std::find_if(v.begin(), v.end(), [](const FieldElement &x) { return !x.is_zero(); });
  if (it == v.end()) return false;
  std::size_t p = static_cast<std::size_t>(it - v.begin());
  FieldElement inv = v[p].inverse();
  for (auto &x : v)
    if (!x.is_zero()) x *= inv;
  for (auto &row : rows_) {
    const FieldElement f = row[p];
    if (f.is_zero()) continue;
    for (std::size_t c = 0; c < ambient_; ++c)
      if (!v[c].is_zero()) row[c] -= f * v[c];
  }
  rows_.push_back(std::move(v));
  pivot_of_row_.push_back(p);
  return true;
}

Subspace EchelonBuilder::subspace() const {
  std::vector<std::size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pivot_of_row_[a] < pivot_of_row_[b]; });
  Matrix m(rows_.size(), ambient_, field_);
  for (std::size_t r = 0; r < order.size(); ++r)
    for (std::size_t c = 0; c < ambient_; ++c) m.at(r, c) = rows_[order[r]][c];
  return Subspace::from_rref(std::move(m));
}

} // namespace nlie
