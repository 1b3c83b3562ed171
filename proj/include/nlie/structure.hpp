#pragma once

// Verification and certification on finite n-Lie algebras and on window
// restrictions of closed-form brackets.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlie/algebra.hpp"
#include "nlie/bracket.hpp"
#include "nlie/kernels.hpp"
#include "nlie/report.hpp"

namespace nlie {

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr std::uint64_t kDefaultLineBudget = 5'000'000;

CheckReport verify_skew(const FiniteNLieAlgebra &L);

enum class FiMode { Exhaustive, Sorted, Sampled };
std::string to_string(FiMode m);

struct FiOptions {
  FiMode mode = FiMode::Exhaustive;
  std::uint64_t samples = 10'000;
  std::uint64_t seed = kDefaultSeed;
  bool parallel = false;
};

CheckReport verify_fundamental_identity(const FiniteNLieAlgebra &L, const FiOptions &opt = {});
/// Every 5-tuple of window basis vectors, evaluated through the bracket itself.
CheckReport verify_fundamental_identity(const TriBracket &b, const std::vector<BasisIndex> &window,
                                        bool parallel = false);

// ---------------------------------------------------------------- subspaces

/// sum_i v_i [e_i, e_J] for a strictly increasing (n-1)-tuple J.
Vector left_multiply(const FiniteNLieAlgebra &L, const std::vector<int> &J, const Vector &v);
Subspace ideal_closure(const FiniteNLieAlgebra &L, const Subspace &seed);
/// L^1 subset of s, by annihilator dot products against basis brackets.
bool contains_derived(const FiniteNLieAlgebra &L, const Subspace &s, bool parallel = false);
bool is_ideal(const FiniteNLieAlgebra &L, const Subspace &s, bool parallel = false);
bool is_maximal_codim1(const FiniteNLieAlgebra &L, const Subspace &s, bool parallel = false);
/// Kernel of x -> sum phi_i x_i.
Subspace kernel_of(const Vector &phi);

/// span of [s, t_2, ..., t_n] for s a basis row of first and t_2 < ... < t_n basis rows of rest.
Subspace bracket_span(const FiniteNLieAlgebra &L, const Subspace &first, const Subspace &rest);
Subspace derived_algebra(const FiniteNLieAlgebra &L);

struct SeriesReport {
  enum class Kind { Derived, LowerCentral } kind = Kind::Derived;
  std::vector<Subspace> terms; // terms[0] = L
  bool stabilized = false;
  bool vanished = false;
  std::vector<std::size_t> dims() const;
};
SeriesReport derived_series(const FiniteNLieAlgebra &L, std::size_t max_steps = 64);
SeriesReport lower_central_series(const FiniteNLieAlgebra &L, std::size_t max_steps = 64);

// ---------------------------------------------------------------- simplicity

struct SimplicityOptions {
  std::uint64_t budget = kDefaultLineBudget;
  std::uint64_t seed = kDefaultSeed;
  std::size_t random_probes = 32;
  bool parallel = false;
  /// Tried first; the first proper nonzero ideal among them is the witness.
  std::vector<Subspace> candidates;
};

struct SimplicityCertificate {
  enum class Verdict { Simple, NonSimple, EvidenceOnly, Refused } verdict = Verdict::Refused;
  std::string method;
  std::uint64_t generators_checked = 0;
  std::uint64_t required_budget = 0;
  std::optional<Subspace> witness;
  std::string note;
};
std::string to_string(SimplicityCertificate::Verdict v);

SimplicityCertificate certify_simplicity(const FiniteNLieAlgebra &L, const SimplicityOptions &opt = {});

// ---------------------------------------------------------------- gradings

/// plus / minus are the +1 / -1 eigen-generators of omega; delta should swap them.
struct GradingReport {
  CheckReport directness;
  CheckReport plus_abelian;
  CheckReport minus_abelian;
  CheckReport delta_swaps;
  std::size_t mixed_evaluated = 0;
  std::size_t mixed_nonzero = 0;
  std::string mixed_example;
  bool passed() const {
    return directness.passed && plus_abelian.passed && minus_abelian.passed && delta_swaps.passed;
  }
};
GradingReport check_grading(const TriBracket &b, const Endomorphism &omega, const Endomorphism &delta,
                            const std::vector<Element> &plus, const std::vector<Element> &minus);
/// t^i + t^-i (i = 0..r, with 1 for i = 0) and t^i - t^-i (i = 1..r).
std::pair<std::vector<Element>, std::vector<Element>> symmetric_generators(const CarrierPtr &laurent,
                                                                          std::int64_t r);

// ---------------------------------------------------------------- homomorphisms

struct HomOptions {
  /// (source map, target map) pairs that must satisfy sigma f = g sigma.
  std::vector<std::pair<Endomorphism, Endomorphism>> intertwine;
  bool require_invertible = true;
  /// Restrict bracket triples to those containing this index.
  std::optional<BasisIndex> only_with;
};

struct HomReport {
  CheckReport invertible;
  CheckReport bracket;
  std::vector<CheckReport> intertwining;
  bool passed() const;
};

/// sigma([a,b,c]_src) = [sigma a, sigma b, sigma c]_tgt on all window triples.
HomReport check_homomorphism(const Endomorphism &sigma, const TriBracket &src, const TriBracket &tgt,
                             const std::vector<BasisIndex> &window, const HomOptions &opt = {});

// ---------------------------------------------------------------- Laurent divisibility

/// g divides f in F[t, t^-1] (one variable). g must be nonzero.
bool laurent_divides(const Element &g, const Element &f);

/// [g t^j, t^a, t^b] divisible by g for |j| <= jr, |a|,|b| <= ar.
CheckReport check_divisibility_ideal(const TriBracket &b, const Element &g, std::int64_t jr,
                                     std::int64_t ar);

} // namespace nlie
