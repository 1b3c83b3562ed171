#pragma once

// Ternary brackets on carrier algebras, Lie algebras and their 3-Lie lifts.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nlie/algebra.hpp"
#include "nlie/carrier.hpp"

namespace nlie {

// ---------------------------------------------------------------- binary brackets

/// [a,b]_Delta = a Delta(b) - b Delta(a)
Element lie_bracket_delta(const Endomorphism &delta, const Element &a, const Element &b);
/// [a,b]_omega = omega(a) b - omega(b) a
Element lie_bracket_omega(const Endomorphism &omega, const Element &a, const Element &b);
/// [a,b]_{omega,Delta} = (a - omega a) Delta(b) - (b - omega b) Delta(a). Checks
/// omega Delta + Delta omega = 0 on the supports of a and b first.
Element lie_bracket_omega_delta(const Endomorphism &omega, const Endomorphism &delta,
                                const Element &a, const Element &b);

/// x -> x - omega(x)
Endomorphism id_minus(const Endomorphism &omega);

// ---------------------------------------------------------------- ternary brackets

class TriBracket {
public:
  explicit TriBracket(CarrierPtr carrier) : carrier_(std::move(carrier)) {}
  virtual ~TriBracket() = default;

  virtual Element eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const = 0;
  /// Trilinear extension of eval_basis.
  virtual Element eval(const Element &a, const Element &b, const Element &c) const;
  virtual std::string form() const = 0;
  virtual std::string name() const = 0;

  const CarrierPtr &carrier() const noexcept { return carrier_; }
  const FieldDescriptor &field() const noexcept { return carrier_->field(); }

protected:
  CarrierPtr carrier_;
};

using BracketPtr = std::shared_ptr<const TriBracket>;

struct IdentityRow {};
using RowOperator = std::variant<Endomorphism, Functional, IdentityRow>;
std::string row_name(const RowOperator &r);

/// Formal 3x3 determinant: rows are maps applied to the columns a, b, c.
class DeterminantBracket final : public TriBracket {
public:
  DeterminantBracket(CarrierPtr carrier, std::vector<RowOperator> rows);
  Element eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const override;
  Element eval(const Element &a, const Element &b, const Element &c) const override;
  std::string form() const override { return "determinant"; }
  std::string name() const override;
  const std::vector<RowOperator> &rows() const noexcept { return rows_; }

private:
  std::vector<RowOperator> rows_;
};

/// alpha(w-h) e_{h+w-g} + alpha(g-w) e_{g+w-h} + alpha(h-g) e_{g+h-w}
class GroupBracket final : public TriBracket {
public:
  explicit GroupBracket(GroupHom alpha);
  Element eval_basis(const BasisIndex &g, const BasisIndex &h, const BasisIndex &w) const override;
  std::string form() const override { return "group"; }
  std::string name() const override { return "[,,]_{omega,alpha*}"; }
  const GroupHom &hom() const noexcept { return alpha_; }

private:
  GroupHom alpha_;
};

/// lambda^l (n-m) t^{m+n-l} + lambda^m (l-n) t^{n+l-m} + lambda^n (m-l) t^{l+m-n}
class LaurentFlipBracket final : public TriBracket {
public:
  LaurentFlipBracket(CarrierPtr laurent, FieldElement lambda);
  Element eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const override;
  std::string form() const override { return "laurent-flip"; }
  std::string name() const override;
  const FieldElement &lambda() const noexcept { return lambda_; }

private:
  FieldElement lambda_;
};

/// c(l,m,n) t^{2k+l+m+n-1} with c(l,m,n) = (-1)^l(n-m) + (-1)^m(l-n) + (-1)^n(m-l).
/// On the cyclic quotient carrier the exponent is reduced into {1-p..p}.
class Laurent2kBracket final : public TriBracket {
public:
  Laurent2kBracket(CarrierPtr carrier, std::int64_t k, std::string form_name = "laurent-2k");
  Element eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const override;
  std::string form() const override { return form_; }
  std::string name() const override;
  std::int64_t k() const noexcept { return k_; }

private:
  std::int64_t k_;
  std::string form_;
};

/// The integer c(l,m,n) above.
long long sign_coefficient(long long l, long long m, long long n);

std::shared_ptr<Laurent2kBracket> delta0_bracket(CarrierPtr laurent);
/// The bracket on F_p[t^{+-1}]/(t^p - t^-p), basis tbar^{1-p}..tbar^p.
std::shared_ptr<Laurent2kBracket> quotient_bracket(std::int64_t p);

/// f(a1,a2,a3) e_{a1+a2+a3+shift} on a carrier indexed by Z.
class MonomialBracket final : public TriBracket {
public:
  using Coefficient = std::function<FieldElement(std::int64_t, std::int64_t, std::int64_t)>;
  /// Validates skewness of f on the cube [-skew_radius, skew_radius]^3.
  MonomialBracket(CarrierPtr carrier, Coefficient f, std::int64_t shift, std::string f_name,
                  std::int64_t skew_radius = 4);
  Element eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const override;
  std::string form() const override { return "monomial"; }
  std::string name() const override;
  std::int64_t shift() const noexcept { return shift_; }
  const Coefficient &coefficient() const noexcept { return f_; }

private:
  Coefficient f_;
  std::int64_t shift_;
  std::string f_name_;
};

/// det[((-1)^l,(-1)^m,(-1)^n),(1,1,1),(l,m,n)] embedded in the field.
MonomialBracket::Coefficient sign_determinant_coefficient(const FieldDescriptor &f);

// ---------------------------------------------------------------- Lie algebras

struct LieAlgebra {
  FieldDescriptor field;
  int dim = 0;
  std::string name;
  std::vector<std::string> labels;
  std::vector<std::vector<SparseVector>> table; // [i][j]

  /// Validates skewness and the Jacobi identity on basis triples.
  static LieAlgebra from_table(const FieldDescriptor &f, std::string name,
                               std::vector<std::vector<SparseVector>> table,
                               std::vector<std::string> labels);
  static LieAlgebra gl(int m, const FieldDescriptor &f);
  /// Basis h, e, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h.
  static LieAlgebra sl2(const FieldDescriptor &f);
  static LieAlgebra abelian(int d, const FieldDescriptor &f);

  const SparseVector &bracket(int i, int j) const { return table.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j)); }
  SparseVector bracket(const SparseVector &a, const SparseVector &b) const;
  /// tr(ad x ad y) on basis pairs.
  Matrix killing_form() const;
  /// Abstract carrier with this algebra's labels and no product.
  CarrierPtr carrier() const;
};

/// The trace on gl(m) as a functional on the Lie algebra's carrier.
Functional trace_functional(const LieAlgebra &gl, const CarrierPtr &carrier);

/// f(x)[y,z] + f(y)[z,x] + f(z)[x,y]. Requires f([x,y]) = 0 on basis pairs.
class LieLiftBracket final : public TriBracket {
public:
  LieLiftBracket(LieAlgebra lie, CarrierPtr carrier, Functional f);
  Element eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const override;
  std::string form() const override { return "lie-lift"; }
  std::string name() const override;
  const LieAlgebra &lie() const noexcept { return lie_; }

private:
  LieAlgebra lie_;
  Functional f_;
};

/// g + F x0 + F x^{-1}: [x0,xi,xj] = [xi,xj], [x^{-1},.,.] = 0,
/// [xi,xj,xk] = sum_s a_ij^s B(xs,xk) x^{-1}. Basis order: g, x0, x^{-1}.
/// Refuses B that is not symmetric, nondegenerate and invariant.
FiniteNLieAlgebra metric_extension(const LieAlgebra &lie, const Matrix &form);

/// The four Euclidean Dirac-basis gamma matrices over Q(i).
std::vector<Matrix> dirac_gammas();
/// [x,y,z] = [[x,y] g5, z] on span{g1..g4}, g5 = g1 g2 g3 g4.
FiniteNLieAlgebra gamma_algebra();

/// Bracket read from a finite structure-constant table.
class StructureBracket final : public TriBracket {
public:
  explicit StructureBracket(std::shared_ptr<const FiniteNLieAlgebra> algebra);
  Element eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const override;
  std::string form() const override { return "structure"; }
  std::string name() const override { return "structure constants"; }
  const FiniteNLieAlgebra &algebra() const noexcept { return *algebra_; }

private:
  std::shared_ptr<const FiniteNLieAlgebra> algebra_;
};

// ---------------------------------------------------------------- tabulation

struct ClosureFailure {
  std::vector<BasisIndex> triple;
  BasisIndex escaped;
  std::string witness;
};

/// Structure constants over an ordered basis, or the first triple whose
/// bracket leaves the span. Every ordered triple is evaluated.
std::variant<FiniteNLieAlgebra, ClosureFailure> tabulate(const TriBracket &bracket,
                                                         const std::vector<BasisIndex> &basis);

/// Lazy algebra on a finite torsion group carrier; avoids storing d^3 slots.
FiniteNLieAlgebra lazy_group_algebra(const GroupBracket &bracket);

} // namespace nlie
