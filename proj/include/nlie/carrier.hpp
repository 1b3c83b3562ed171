#pragma once

// Commutative associative carrier algebras and their distinguished maps.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nlie/field.hpp"
#include "nlie/linalg.hpp"
#include "nlie/report.hpp"

namespace nlie {

/// Laurent exponent tuple, group element (free coordinates then torsion
/// residues), quotient exponent, or abstract basis ordinal.
struct BasisIndex {
  std::vector<std::int64_t> c;
  auto operator<=>(const BasisIndex &) const = default;
  bool operator==(const BasisIndex &) const = default;
};

inline BasisIndex idx(std::int64_t a) { return BasisIndex{{a}}; }

enum class CarrierShape {
  Laurent,        // F[t_1^{+-1}, ..., t_k^{+-1}]
  Group,          // F[Z^a x Z_m1 x ... x Z_mb]
  CyclicQuotient, // F[t^{+-1}] / (t^p - t^-p), exponents kept in {1-p, ..., p}
  Abstract,       // finite basis, optional commutative multiplication table
  GammaSpan,      // span of four 4x4 Dirac matrices; no internal product
};

class Carrier;
using CarrierPtr = std::shared_ptr<const Carrier>;

class Carrier {
public:
  static CarrierPtr laurent(const FieldDescriptor &f, int vars = 1);
  static CarrierPtr group(const FieldDescriptor &f, int free_rank, std::vector<std::int64_t> torsion);
  /// Requires p prime, p > 2, and the field to be F_p.
  static CarrierPtr cyclic_quotient(const FieldDescriptor &f, std::int64_t p);
  /// products[i][j] = e_i * e_j as a sparse vector; empty table means no product.
  static CarrierPtr abstract(const FieldDescriptor &f, int dim,
                             std::vector<std::vector<SparseVector>> products = {},
                             std::vector<std::string> labels = {});
  static CarrierPtr gamma_span();

  const FieldDescriptor &field() const noexcept { return field_; }
  CarrierShape shape() const noexcept { return shape_; }
  int vars() const noexcept { return vars_; }
  int free_rank() const noexcept { return free_rank_; }
  const std::vector<std::int64_t> &torsion() const noexcept { return torsion_; }
  std::int64_t quotient_p() const noexcept { return quotient_p_; }
  int abstract_dim() const noexcept { return abstract_dim_; }
  bool has_product() const noexcept;

  bool same_as(const Carrier &other) const;
  BasisIndex canonical(BasisIndex i) const;
  void validate(const BasisIndex &i) const;
  /// Product of two basis vectors as (index, coefficient) terms.
  std::vector<std::pair<BasisIndex, FieldElement>> multiply_basis(const BasisIndex &a,
                                                                  const BasisIndex &b) const;
  std::optional<BasisIndex> unit() const;

  bool is_finite() const noexcept;
  /// Every basis index of a finite carrier, in a fixed order.
  std::vector<BasisIndex> finite_basis() const;
  /// Ordinal of an index in finite_basis(), computed arithmetically.
  std::size_t ordinal(const BasisIndex &i) const;

  std::string render(const BasisIndex &i) const;
  BasisIndex parse_index(const std::string &text) const;
  std::string describe() const;

private:
  Carrier() = default;
  FieldDescriptor field_;
  CarrierShape shape_ = CarrierShape::Laurent;
  int vars_ = 0;
  int free_rank_ = 0;
  std::vector<std::int64_t> torsion_;
  std::int64_t quotient_p_ = 0;
  int abstract_dim_ = 0;
  std::vector<std::vector<SparseVector>> products_;
  std::vector<std::string> labels_;
};

/// Sparse finite linear combination of carrier basis vectors.
class Element {
public:
  using Terms = std::map<BasisIndex, FieldElement>;

  explicit Element(CarrierPtr carrier);
  static Element basis(CarrierPtr carrier, const BasisIndex &i);
  static Element basis(CarrierPtr carrier, const BasisIndex &i, const FieldElement &coeff);

  const CarrierPtr &carrier() const noexcept { return carrier_; }
  const Terms &terms() const noexcept { return terms_; }
  const FieldDescriptor &field() const noexcept { return carrier_->field(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  FieldElement coefficient(const BasisIndex &i) const;

  void add_term(const BasisIndex &i, const FieldElement &c);

  Element &operator+=(const Element &o);
  Element &operator-=(const Element &o);
  Element operator-() const;
  friend Element operator+(Element a, const Element &b) { return a += b; }
  friend Element operator-(Element a, const Element &b) { return a -= b; }
  friend Element operator*(const FieldElement &s, const Element &x);
  /// Carrier product, extended bilinearly.
  friend Element operator*(const Element &x, const Element &y);

  friend bool operator==(const Element &a, const Element &b);
  std::string to_string() const;

  void check_carrier(const Carrier &c) const;

private:
  CarrierPtr carrier_;
  Terms terms_;
};

/// Additive homomorphism G -> F^+, given by its values on generators.
/// Torsion generator values must satisfy value * m = 0 in F.
class GroupHom {
public:
  GroupHom(CarrierPtr group, std::vector<FieldElement> free_values,
           std::vector<FieldElement> torsion_values);
  FieldElement operator()(const BasisIndex &g) const;
  const std::vector<FieldElement> &free_values() const noexcept { return free_; }
  const std::vector<FieldElement> &torsion_values() const noexcept { return torsion_; }
  bool is_zero() const;
  const CarrierPtr &carrier() const noexcept { return carrier_; }

private:
  CarrierPtr carrier_;
  std::vector<FieldElement> free_, torsion_;
};

/// Linear endomorphism of a carrier, defined on basis vectors.
class Endomorphism {
public:
  struct LaurentDerivation {
    int var;
    std::int64_t power; // t_var^power * d/dt_var
  };
  /// t^m -> factor * prod_j scale_j^{m_j} * t^{sign*m + shift}
  struct LaurentMonomialMap {
    std::vector<FieldElement> scale;
    int sign;
    std::vector<std::int64_t> shift;
    FieldElement factor;
  };
  struct GroupNegation {};
  struct GroupHomDerivation {
    GroupHom hom;
  };
  struct Table {
    std::map<BasisIndex, Element> images;
  };
  struct Identity {};
  struct Custom {
    std::function<Element(const BasisIndex &)> fn;
  };
  using Rule = std::variant<LaurentDerivation, LaurentMonomialMap, GroupNegation,
                            GroupHomDerivation, Table, Identity, Custom>;

  Endomorphism(CarrierPtr carrier, Rule rule, std::string name);

  Element apply_basis(const BasisIndex &i) const;
  Element operator()(const Element &x) const;
  const std::string &name() const noexcept { return name_; }
  const CarrierPtr &carrier() const noexcept { return carrier_; }
  const Rule &rule() const noexcept { return rule_; }

private:
  CarrierPtr carrier_;
  Rule rule_;
  std::string name_;
};

// Endomorphism factories. Laurent rules also act on the cyclic quotient carrier.
Endomorphism laurent_derivation(CarrierPtr c, std::int64_t power, int var = 0);
/// t^m -> eps^m t^m.
Endomorphism laurent_sign_involution(CarrierPtr c, std::vector<FieldElement> eps);
Endomorphism laurent_sign_involution(CarrierPtr c, long long eps);
/// t^m -> lambda^m t^{-m} (per-variable lambdas).
Endomorphism laurent_flip_involution(CarrierPtr c, std::vector<FieldElement> lambda);
Endomorphism laurent_flip_involution(CarrierPtr c, const FieldElement &lambda);
/// t^m -> c^m t^m.
Endomorphism laurent_scaling(CarrierPtr c, const FieldElement &scale);
/// t^m -> factor * t^{m + shift}.
Endomorphism laurent_shift(CarrierPtr c, std::int64_t shift, const FieldElement &factor);
Endomorphism group_negation(CarrierPtr c);
Endomorphism group_hom_derivation(const GroupHom &hom);
Endomorphism identity_map(CarrierPtr c);
Endomorphism zero_map(CarrierPtr c);
Endomorphism table_map(CarrierPtr c, std::map<BasisIndex, Element> images, std::string name);
Endomorphism custom_map(CarrierPtr c, std::function<Element(const BasisIndex &)> fn,
                        std::string name);

/// Linear functional A -> F, defined on basis vectors.
class Functional {
public:
  struct AlternatingSign {
    int var;
  };
  struct ConstantOne {};
  struct ExponentValue {
    int var;
  };
  struct GroupHomFunctional {
    GroupHom hom;
  };
  struct Table {
    std::map<BasisIndex, FieldElement> values;
  };
  using Rule = std::variant<AlternatingSign, ConstantOne, ExponentValue, GroupHomFunctional, Table>;

  Functional(CarrierPtr carrier, Rule rule, std::string name);

  FieldElement apply_basis(const BasisIndex &i) const;
  FieldElement operator()(const Element &x) const;
  const std::string &name() const noexcept { return name_; }
  const CarrierPtr &carrier() const noexcept { return carrier_; }

private:
  CarrierPtr carrier_;
  Rule rule_;
  std::string name_;
};

Functional alternating_sign(CarrierPtr c, int var = 0);
Functional constant_one(CarrierPtr c);
Functional exponent_value(CarrierPtr c, int var = 0);
/// phi_alpha(sum lambda_g e_g) = sum lambda_g alpha(g).
Functional group_hom_functional(const GroupHom &hom);
Functional table_functional(CarrierPtr c, std::map<BasisIndex, FieldElement> values,
                            std::string name);
Functional zero_functional(CarrierPtr c);

// Law checks over a finite window of basis indices.
CheckReport check_derivation(const Endomorphism &d, const std::vector<BasisIndex> &window);
CheckReport check_involution(const Endomorphism &w, const std::vector<BasisIndex> &window);
/// (omega Delta + Delta omega)(x) = 0 on window singletons.
CheckReport check_anticommute(const Endomorphism &omega, const Endomorphism &delta,
                              const std::vector<BasisIndex> &window);

/// One report per condition: alpha(ab) = 0; beta([a,b]_Delta) = 0;
/// gamma([a,b]_Delta) = gamma(omega(a)Delta(b) - omega(b)Delta(a)).
struct FunctionalConditionsReport {
  CheckReport alpha;
  CheckReport beta;
  CheckReport gamma;
  bool all_passed() const { return alpha.passed && beta.passed && gamma.passed; }
};
FunctionalConditionsReport check_functional_conditions(const Functional &alpha,
                                                       const Functional &beta,
                                                       const Functional &gamma,
                                                       const Endomorphism &delta,
                                                       const Endomorphism &omega,
                                                       const std::vector<BasisIndex> &window);

/// A parametric family of involutions of F[t^{+-1}].
struct InvolutionFamily {
  std::string name;
  std::string rule;
  std::function<Endomorphism(const FieldElement &)> make;
  std::function<bool(const FieldElement &)> admissible;
};
/// The sign family t^m -> eps^m t^m (eps = +-1) and the flip family
/// t^m -> lambda^m t^{-m} (lambda != 0). Refuses characteristic 2.
std::vector<InvolutionFamily> classify_involutions(const CarrierPtr &laurent);

/// Laurent monomials t^lo, ..., t^hi in one variable.
std::vector<BasisIndex> laurent_window(std::int64_t lo, std::int64_t hi);

} // namespace nlie
