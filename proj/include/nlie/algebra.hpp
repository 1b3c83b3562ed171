#pragma once

// Finite-dimensional n-ary algebras given by structure constants.

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nlie/linalg.hpp"

namespace nlie {

/// Sign of the permutation sorting idx, or 0 when an index repeats.
int sort_with_sign(std::vector<int> &idx);

class FiniteNLieAlgebra {
public:
  /// Called with strictly increasing indices.
  using SortedEvaluator = std::function<SparseVector(std::span<const int>)>;
  using Constants = std::map<std::vector<int>, SparseVector>;

  /// Skew completion of constants keyed by strictly increasing tuples.
  static FiniteNLieAlgebra from_constants(const FieldDescriptor &f, int dim, int arity,
                                          const Constants &constants,
                                          std::vector<std::string> labels = {});
  /// One entry per ordered tuple, lexicographic (first index most significant).
  /// Nothing is assumed about skewness.
  static FiniteNLieAlgebra from_ordered(const FieldDescriptor &f, int dim, int arity,
                                        std::vector<SparseVector> table,
                                        std::vector<std::string> labels = {});
  /// Evaluated on demand; used when d^n is too large to store.
  static FiniteNLieAlgebra lazy(const FieldDescriptor &f, int dim, int arity, SortedEvaluator eval,
                                std::vector<std::string> labels = {});

  const FieldDescriptor &field() const noexcept { return field_; }
  int dim() const noexcept { return dim_; }
  int arity() const noexcept { return arity_; }
  bool is_lazy() const noexcept { return static_cast<bool>(lazy_); }
  const std::vector<std::string> &labels() const noexcept { return labels_; }
  const std::string &label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }

  std::map<std::string, std::string> &metadata() noexcept { return metadata_; }
  const std::map<std::string, std::string> &metadata() const noexcept { return metadata_; }

  /// Bracket of basis vectors in the given order. Lazy algebras write into
  /// scratch and return it; tabulated ones return the stored entry.
  const SparseVector &bracket(std::span<const int> idx, SparseVector &scratch) const;
  SparseVector bracket_of(std::span<const int> idx) const;
  /// Multilinear extension to sparse coordinate vectors.
  SparseVector bracket(std::span<const SparseVector> args) const;

  /// Entries with strictly increasing tuples and nonzero value, read from
  /// the sorted slot of the ordered table.
  Constants constants() const;

  /// Replaces the single ordered slot idx; other orderings are untouched.
  FiniteNLieAlgebra with_entry(const std::vector<int> &idx, SparseVector v) const;
  /// Replaces a constant together with all its permutations.
  FiniteNLieAlgebra with_constant(const std::vector<int> &sorted, const SparseVector &v) const;

  std::size_t slot(std::span<const int> idx) const;
  std::string render(const SparseVector &v) const;

private:
  FiniteNLieAlgebra(const FieldDescriptor &f, int dim, int arity, std::vector<std::string> labels);
  FieldDescriptor field_;
  int dim_;
  int arity_;
  std::vector<std::string> labels_;
  std::map<std::string, std::string> metadata_;
  std::shared_ptr<const std::vector<SparseVector>> table_;
  SortedEvaluator lazy_;
};

} // namespace nlie
