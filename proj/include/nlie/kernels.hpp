#pragma once

// Hot loops: exhaustive fundamental-identity scan and F_p line enumeration.
// Each has a serial reference and an OpenMP variant that must agree with it.

#include <cstdint>
#include <optional>
#include <vector>

#include "nlie/algebra.hpp"

namespace nlie::kernels {

enum class TupleOrder {
  Full,   // all d^(2n-1) tuples
  Sorted, // x1 < ... < xn and y2 < ... < yn
};

struct FiScan {
  std::uint64_t evaluated = 0;
  std::uint64_t failures = 0;
  /// First failing tuple in enumeration order: x1..xn, y2..yn.
  std::optional<std::vector<int>> witness;
  SparseVector residual;
};

/// LHS - RHS of [[x1..xn], y2..yn] = sum_i [x1..[xi,y2..yn]..xn] on basis vectors.
SparseVector fi_residual(const FiniteNLieAlgebra &L, const std::vector<int> &tuple);

FiScan fi_scan_serial(const FiniteNLieAlgebra &L, TupleOrder order);
FiScan fi_scan_parallel(const FiniteNLieAlgebra &L, TupleOrder order);

/// Left multiplications ad(e_J) for every strictly increasing (n-1)-tuple J,
/// as dense residue matrices. Only for prime fields.
class PrimeAdTable {
public:
  explicit PrimeAdTable(const FiniteNLieAlgebra &L);
  int dim() const noexcept { return d_; }
  std::uint32_t p() const noexcept { return p_; }
  std::size_t count() const noexcept { return mats_.size() / (static_cast<std::size_t>(d_) * d_); }
  /// out = ad_J v, entries reduced mod p.
  void apply(std::size_t j, const std::uint32_t *v, std::uint32_t *out) const;

private:
  int d_;
  std::uint32_t p_;
  bool lazy_reduce_;
  std::vector<std::uint32_t> mats_; // [J][row][col]
};

/// Number of one-dimensional subspaces of F_p^d, saturating at UINT64_MAX.
std::uint64_t line_count(std::uint32_t p, int d);
/// Representative with first nonzero coordinate 1, in enumeration order.
void decode_line(std::uint64_t ordinal, std::uint32_t p, int d, std::uint32_t *v);

/// Ideal closure of span{v}; returns true when it is the whole space. When
/// it is not and basis_out is given, the closure's rows are written there.
bool closure_is_full(const PrimeAdTable &T, const std::uint32_t *v,
                     std::vector<std::vector<std::uint32_t>> *basis_out = nullptr);

struct LineScan {
  std::uint64_t total = 0;
  /// Lines up to and including the first proper closure, or total.
  std::uint64_t checked = 0;
  std::optional<std::uint64_t> first_proper;
};

LineScan line_scan_serial(const PrimeAdTable &T);
LineScan line_scan_parallel(const PrimeAdTable &T);

int max_threads();

} // namespace nlie::kernels
