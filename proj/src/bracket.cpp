#include "nlie/bracket.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace nlie {

// ---------------------------------------------------------------- binary brackets

Element lie_bracket_delta(const Endomorphism &delta, const Element &a, const Element &b) {
  return a * delta(b) - b * delta(a);
}

Element lie_bracket_omega(const Endomorphism &omega, const Element &a, const Element &b) {
  return omega(a) * b - omega(b) * a;
}

Element lie_bracket_omega_delta(const Endomorphism &omega, const Endomorphism &delta,
                                const Element &a, const Element &b) {
  std::set<BasisIndex> support;
  for (const auto &[i, c] : a.terms()) support.insert(i);
  for (const auto &[i, c] : b.terms()) support.insert(i);
  auto rep = check_anticommute(omega, delta, std::vector<BasisIndex>(support.begin(), support.end()));
  if (!rep.passed) throw HypothesisViolation("omega*Delta + Delta*omega = 0", rep.witness);
  Element ua = a - omega(a), ub = b - omega(b);
  return ua * delta(b) - ub * delta(a);
}

Endomorphism id_minus(const Endomorphism &omega) {
  auto c = omega.carrier();
  return custom_map(
      c,
      [omega, c](const BasisIndex &i) {
        Element x = Element::basis(c, i);
        return x - omega.apply_basis(i);
      },
      "(id - " + omega.name() + ")");
}

// ---------------------------------------------------------------- TriBracket

Element TriBracket::eval(const Element &a, const Element &b, const Element &c) const {
  a.check_carrier(*carrier_);
  b.check_carrier(*carrier_);
  c.check_carrier(*carrier_);
  Element out(carrier_);
  for (const auto &[i, ci] : a.terms())
    for (const auto &[j, cj] : b.terms()) {
      FieldElement cij = ci * cj;
      for (const auto &[k, ck] : c.terms()) out += (cij * ck) * eval_basis(i, j, k);
    }
  return out;
}

// ---------------------------------------------------------------- determinant

std::string row_name(const RowOperator &r) {
  return std::visit(
      [](const auto &x) -> std::string {
        using R = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<R, IdentityRow>) return "id";
        else return x.name();
      },
      r);
}

DeterminantBracket::DeterminantBracket(CarrierPtr carrier, std::vector<RowOperator> rows)
    : TriBracket(std::move(carrier)), rows_(std::move(rows)) {
  if (rows_.size() != 3) throw ConfigurationError("determinant bracket needs exactly three rows");
  int algebra_rows = 0;
  for (const auto &r : rows_) {
    if (const auto *e = std::get_if<Endomorphism>(&r)) {
      if (!e->carrier()->same_as(*carrier_)) throw ConfigurationError("row '" + e->name() + "' acts on another carrier");
      ++algebra_rows;
    } else if (const auto *f = std::get_if<Functional>(&r)) {
      if (!f->carrier()->same_as(*carrier_)) throw ConfigurationError("row '" + f->name() + "' acts on another carrier");
    } else {
      ++algebra_rows;
    }
  }
  if (algebra_rows == 0) throw ConfigurationError("determinant with only functional rows is scalar-valued");
  if (algebra_rows > 1 && !carrier_->has_product())
    throw ConfigurationError("determinant with several algebra-valued rows needs a carrier product");
}

std::string DeterminantBracket::name() const {
  return "det(" + row_name(rows_[0]) + ", " + row_name(rows_[1]) + ", " + row_name(rows_[2]) + ")";
}

namespace {

struct Cell {
  std::optional<Element> elem;
  std::optional<FieldElement> scalar;
};

Cell apply_row(const RowOperator &r, const Element &x) {
  Cell c;
  std::visit(
      [&](const auto &op) {
        using R = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<R, IdentityRow>) c.elem = x;
        else if constexpr (std::is_same_v<R, Functional>) c.scalar = op(x);
        else c.elem = op(x);
      },
      r);
  return c;
}

constexpr std::array<std::array<int, 3>, 6> kPerms{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
constexpr std::array<int, 6> kPermSign{1, 1, 1, -1, -1, -1};

} // namespace

Element DeterminantBracket::eval(const Element &a, const Element &b, const Element &c) const {
  a.check_carrier(*carrier_);
  b.check_carrier(*carrier_);
  c.check_carrier(*carrier_);
  const std::array<const Element *, 3> cols{&a, &b, &c};
  std::array<std::array<Cell, 3>, 3> cell;
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k) cell[r][k] = apply_row(rows_[static_cast<std::size_t>(r)], *cols[static_cast<std::size_t>(k)]);
  Element out(carrier_);
  const auto &f = field();
  for (std::size_t s = 0; s < kPerms.size(); ++s) {
    FieldElement scalar = FieldElement::from_int(kPermSign[s], f);
    std::optional<Element> prod;
    for (int r = 0; r < 3 && !scalar.is_zero(); ++r) {
      const Cell &x = cell[r][kPerms[s][static_cast<std::size_t>(r)]];
      if (x.scalar) {
        scalar *= *x.scalar;
      } else if (!prod) {
        prod = *x.elem;
      } else {
        prod = *prod * *x.elem;
      }
    }
    if (scalar.is_zero() || !prod || prod->is_zero()) continue;
    out += scalar * *prod;
  }
  return out;
}

Element DeterminantBracket::eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const {
  return eval(Element::basis(carrier_, a), Element::basis(carrier_, b), Element::basis(carrier_, c));
}

// ---------------------------------------------------------------- group

GroupBracket::GroupBracket(GroupHom alpha) : TriBracket(alpha.carrier()), alpha_(std::move(alpha)) {}

Element GroupBracket::eval_basis(const BasisIndex &g, const BasisIndex &h, const BasisIndex &w) const {
  auto comb = [&](const BasisIndex &x, const BasisIndex &y, const BasisIndex &z) {
    BasisIndex r = x;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = x.c[i] + y.c.at(i) - z.c.at(i);
    return carrier_->canonical(std::move(r));
  };
  FieldElement ag = alpha_(g), ah = alpha_(h), aw = alpha_(w);
  Element out(carrier_);
  out.add_term(comb(h, w, g), aw - ah);
  out.add_term(comb(g, w, h), ag - aw);
  out.add_term(comb(g, h, w), ah - ag);
  return out;
}

// ---------------------------------------------------------------- Laurent closed forms

namespace {

void require_one_variable(const CarrierPtr &c, const char *what) {
  if (c->shape() != CarrierShape::Laurent || c->vars() != 1)
    throw ConfigurationError(std::string(what) + " is defined on F[t^{+-1}] in one variable");
}

} // namespace

LaurentFlipBracket::LaurentFlipBracket(CarrierPtr laurent, FieldElement lambda)
    : TriBracket(std::move(laurent)), lambda_(std::move(lambda)) {
  require_one_variable(carrier_, "the flip bracket");
  field().require_char_not_two("flip bracket");
  if (lambda_.is_zero()) throw HypothesisViolation("lambda != 0", "flip bracket with lambda = 0");
  if (!(lambda_.descriptor() == field())) throw ConfigurationError("lambda over wrong field");
}

std::string LaurentFlipBracket::name() const {
  return "[,,]_{omega_lambda,delta} lambda=" + lambda_.to_string();
}

Element LaurentFlipBracket::eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const {
  const auto l = a.c.at(0), m = b.c.at(0), n = c.c.at(0);
  const auto &f = field();
  Element out(carrier_);
  out.add_term(idx(m + n - l), lambda_.pow(l) * FieldElement::from_int(n - m, f));
  out.add_term(idx(n + l - m), lambda_.pow(m) * FieldElement::from_int(l - n, f));
  out.add_term(idx(l + m - n), lambda_.pow(n) * FieldElement::from_int(m - l, f));
  return out;
}

long long sign_coefficient(long long l, long long m, long long n) {
  auto sg = [](long long x) { return x % 2 == 0 ? 1LL : -1LL; };
  return sg(l) * (n - m) + sg(m) * (l - n) + sg(n) * (m - l);
}

Laurent2kBracket::Laurent2kBracket(CarrierPtr carrier, std::int64_t k, std::string form_name)
    : TriBracket(std::move(carrier)), k_(k), form_(std::move(form_name)) {
  if (carrier_->shape() == CarrierShape::CyclicQuotient) {
    if (k_ != 0) throw ConfigurationError("the quotient bracket uses delta_0 (k = 0)");
  } else {
    require_one_variable(carrier_, "the t^{2k} d/dt bracket");
  }
  field().require_char_not_two("sign-involution bracket");
}

std::string Laurent2kBracket::name() const {
  if (carrier_->shape() == CarrierShape::CyclicQuotient)
    return "[,,]_{omega,delta_0} mod t^" + std::to_string(carrier_->quotient_p()) + " - t^-" +
           std::to_string(carrier_->quotient_p());
  if (form_ == "delta0") return "[,,]_{omega,delta_0}";
  return "[,,]_{omega,delta_" + std::to_string(2 * k_) + "}";
}

Element Laurent2kBracket::eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const {
  const auto l = a.c.at(0), m = b.c.at(0), n = c.c.at(0);
  Element out(carrier_);
  long long coeff = sign_coefficient(l, m, n);
  if (coeff != 0)
    out.add_term(carrier_->canonical(idx(2 * k_ + l + m + n - 1)), FieldElement::from_int(coeff, field()));
  return out;
}

std::shared_ptr<Laurent2kBracket> delta0_bracket(CarrierPtr laurent) {
  return std::make_shared<Laurent2kBracket>(std::move(laurent), 0, "delta0");
}

std::shared_ptr<Laurent2kBracket> quotient_bracket(std::int64_t p) {
  if (p <= 2) throw HypothesisViolation("ch F = p > 2", "quotient bracket requested with p = " + std::to_string(p));
  auto f = FieldDescriptor::prime(static_cast<std::uint64_t>(p));
  return std::make_shared<Laurent2kBracket>(Carrier::cyclic_quotient(f, p), 0, "quotient");
}

// ---------------------------------------------------------------- monomial

MonomialBracket::MonomialBracket(CarrierPtr carrier, Coefficient f, std::int64_t shift,
                                 std::string f_name, std::int64_t skew_radius)
    : TriBracket(std::move(carrier)), f_(std::move(f)), shift_(shift), f_name_(std::move(f_name)) {
  bool z_indexed = (carrier_->shape() == CarrierShape::Laurent && carrier_->vars() == 1) ||
                   (carrier_->shape() == CarrierShape::Group && carrier_->free_rank() == 1 &&
                    carrier_->torsion().empty());
  if (!z_indexed) throw ConfigurationError("monomial bracket needs a carrier indexed by Z");
  const auto r = skew_radius;
  for (auto a = -r; a <= r; ++a)
    for (auto b = -r; b <= r; ++b)
      for (auto c = -r; c <= r; ++c) {
        FieldElement v = f_(a, b, c);
        auto where = "f(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
        if (!(v.descriptor() == field())) throw ConfigurationError("coefficient over wrong field");
        if (!(f_(b, a, c) == -v) || !(f_(a, c, b) == -v))
          throw ConfigurationError("monomial coefficient is not skew-symmetric at " + where);
      }
}

std::string MonomialBracket::name() const {
  return "A(Z, " + f_name_ + ", " + std::to_string(shift_) + ")";
}

Element MonomialBracket::eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const {
  const auto l = a.c.at(0), m = b.c.at(0), n = c.c.at(0);
  Element out(carrier_);
  out.add_term(idx(l + m + n + shift_), f_(l, m, n));
  return out;
}

MonomialBracket::Coefficient sign_determinant_coefficient(const FieldDescriptor &f) {
  return [f](std::int64_t l, std::int64_t m, std::int64_t n) {
    return FieldElement::from_int(sign_coefficient(l, m, n), f);
  };
}

// ---------------------------------------------------------------- Lie algebras

namespace {

SparseVector negated_vec(const SparseVector &v) {
  SparseVector out = v;
  for (auto &[i, c] : out) c = -c;
  return out;
}

Element to_element(const CarrierPtr &c, const SparseVector &v) {
  Element e(c);
  for (const auto &[i, x] : v) e.add_term(idx(i), x);
  return e;
}

} // namespace

SparseVector LieAlgebra::bracket(const SparseVector &a, const SparseVector &b) const {
  SparseVector acc;
  for (const auto &[i, x] : a)
    for (const auto &[j, y] : b) axpy(acc, x * y, bracket(i, j));
  return acc;
}

LieAlgebra LieAlgebra::from_table(const FieldDescriptor &f, std::string name,
                                  std::vector<std::vector<SparseVector>> table,
                                  std::vector<std::string> labels) {
  LieAlgebra L;
  L.field = f;
  L.dim = static_cast<int>(table.size());
  L.name = std::move(name);
  L.table = std::move(table);
  L.labels = std::move(labels);
  if (L.dim < 1) throw ConfigurationError("Lie algebra needs positive dimension");
  if (L.labels.empty())
    for (int i = 0; i < L.dim; ++i) L.labels.push_back("x" + std::to_string(i + 1));
  if (L.labels.size() != static_cast<std::size_t>(L.dim)) throw DimensionMismatch("label count");
  for (const auto &row : L.table)
    if (row.size() != static_cast<std::size_t>(L.dim)) throw DimensionMismatch("Lie table must be square");
  for (int i = 0; i < L.dim; ++i)
    for (int j = 0; j < L.dim; ++j)
      if (L.bracket(i, j) != negated_vec(L.bracket(j, i)))
        throw HypothesisViolation("[x,y] = -[y,x]", L.labels[static_cast<std::size_t>(i)] + ", " + L.labels[static_cast<std::size_t>(j)]);
  auto unit = [&](int i) { return SparseVector{{i, FieldElement::one(f)}}; };
  for (int i = 0; i < L.dim; ++i)
    for (int j = i + 1; j < L.dim; ++j)
      for (int k = j + 1; k < L.dim; ++k) {
        SparseVector s = L.bracket(unit(i), L.bracket(j, k));
        axpy(s, FieldElement::one(f), L.bracket(unit(j), L.bracket(k, i)));
        axpy(s, FieldElement::one(f), L.bracket(unit(k), L.bracket(i, j)));
        if (!s.empty())
          throw HypothesisViolation("Jacobi identity", L.labels[static_cast<std::size_t>(i)] + ", " +
                                                           L.labels[static_cast<std::size_t>(j)] + ", " +
                                                           L.labels[static_cast<std::size_t>(k)]);
      }
  return L;
}

LieAlgebra LieAlgebra::gl(int m, const FieldDescriptor &f) {
  if (m < 1) throw ConfigurationError("gl(m) needs m >= 1");
  const int d = m * m;
  auto e = [m](int i, int j) { return i * m + j; };
  std::vector<std::vector<SparseVector>> t(static_cast<std::size_t>(d), std::vector<SparseVector>(static_cast<std::size_t>(d)));
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
  // [E_ij, E_kl] = delta_jk E_il - delta_li E_kj
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          SparseVector v;
          if (j == k) axpy(v, FieldElement::one(f), {{e(i, l), FieldElement::one(f)}});
          if (l == i) axpy(v, -FieldElement::one(f), {{e(k, j), FieldElement::one(f)}});
          t[static_cast<std::size_t>(e(i, j))][static_cast<std::size_t>(e(k, l))] = std::move(v);
        }
  return from_table(f, "gl(" + std::to_string(m) + ")", std::move(t), std::move(labels));
}

LieAlgebra LieAlgebra::sl2(const FieldDescriptor &f) {
  std::vector<std::vector<SparseVector>> t(3, std::vector<SparseVector>(3));
  auto c = [&](long long n) { return FieldElement::from_int(n, f); };
  t[0][1] = {{1, c(2)}};
  t[1][0] = {{1, c(-2)}};
  t[0][2] = {{2, c(-2)}};
  t[2][0] = {{2, c(2)}};
  t[1][2] = {{0, c(1)}};
  t[2][1] = {{0, c(-1)}};
  return from_table(f, "sl(2)", std::move(t), {"h", "e", "f"});
}

LieAlgebra LieAlgebra::abelian(int d, const FieldDescriptor &f) {
  std::vector<std::vector<SparseVector>> t(static_cast<std::size_t>(d), std::vector<SparseVector>(static_cast<std::size_t>(d)));
  return from_table(f, "abelian(" + std::to_string(d) + ")", std::move(t), {});
}

Matrix LieAlgebra::killing_form() const {
  const auto n = static_cast<std::size_t>(dim);
  // ad[x](k, j) = coefficient of e_k in [e_x, e_j]
  std::vector<Matrix> ad;
  for (int x = 0; x < dim; ++x) {
    Matrix m(n, n, field);
    for (int j = 0; j < dim; ++j)
      for (const auto &[k, c] : bracket(x, j)) m.at(static_cast<std::size_t>(k), static_cast<std::size_t>(j)) = c;
    ad.push_back(std::move(m));
  }
  Matrix B(n, n, field);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      FieldElement s = FieldElement::zero(field);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (!ad[x].at(j, k).is_zero() && !ad[y].at(k, j).is_zero()) s += ad[x].at(j, k) * ad[y].at(k, j);
      B.at(x, y) = s;
    }
  return B;
}

CarrierPtr LieAlgebra::carrier() const { return Carrier::abstract(field, dim, {}, labels); }

Functional trace_functional(const LieAlgebra &gl, const CarrierPtr &carrier) {
  int m = 0;
  while (m * m < gl.dim) ++m;
  if (m * m != gl.dim) throw ConfigurationError("trace needs a square matrix algebra");
  std::map<BasisIndex, FieldElement> values;
  for (int i = 0; i < m; ++i) values.emplace(idx(i * m + i), FieldElement::one(gl.field));
  return table_functional(carrier, std::move(values), "tr");
}

LieLiftBracket::LieLiftBracket(LieAlgebra lie, CarrierPtr carrier, Functional f)
    : TriBracket(std::move(carrier)), lie_(std::move(lie)), f_(std::move(f)) {
  if (carrier_->shape() != CarrierShape::Abstract || carrier_->abstract_dim() != lie_.dim)
    throw ConfigurationError("Lie lift needs the Lie algebra's own carrier");
  if (!f_.carrier()->same_as(*carrier_)) throw ConfigurationError("functional acts on another carrier");
  for (int i = 0; i < lie_.dim; ++i)
    for (int j = i + 1; j < lie_.dim; ++j) {
      FieldElement v = f_(to_element(carrier_, lie_.bracket(i, j)));
      if (!v.is_zero())
        throw HypothesisViolation("f([x,y]) = 0", f_.name() + "([" + lie_.labels[static_cast<std::size_t>(i)] + ", " +
                                                      lie_.labels[static_cast<std::size_t>(j)] + "]) = " + v.to_string());
    }
}

std::string LieLiftBracket::name() const { return "[,,]_" + f_.name() + " on " + lie_.name; }

Element LieLiftBracket::eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const {
  const int x = static_cast<int>(a.c.at(0)), y = static_cast<int>(b.c.at(0)), z = static_cast<int>(c.c.at(0));
  SparseVector acc;
  axpy(acc, f_.apply_basis(a), lie_.bracket(y, z));
  axpy(acc, f_.apply_basis(b), lie_.bracket(z, x));
  axpy(acc, f_.apply_basis(c), lie_.bracket(x, y));
  return to_element(carrier_, acc);
}

// ---------------------------------------------------------------- metric extension

FiniteNLieAlgebra metric_extension(const LieAlgebra &lie, const Matrix &B) {
  const int m = lie.dim;
  const auto &f = lie.field;
  if (B.rows() != static_cast<std::size_t>(m) || B.cols() != static_cast<std::size_t>(m))
    throw DimensionMismatch("bilinear form size differs from the Lie algebra");
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!(B.at(i, j) == B.at(j, i)))
        throw HypothesisViolation("B symmetric", "B(" + lie.labels[i] + ", " + lie.labels[j] + ")");
  if (rref(B).rows() != B.rows()) throw HypothesisViolation("B nondegenerate", "rank " + std::to_string(rref(B).rows()));
  auto Bv = [&](const SparseVector &v, int k) {
    FieldElement s = FieldElement::zero(f);
    for (const auto &[i, c] : v) s += c * B.at(static_cast<std::size_t>(i), static_cast<std::size_t>(k));
    return s;
  };
  // B([x,y],z) = -B(y,[x,z])
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      for (int z = 0; z < m; ++z) {
        FieldElement lhs = Bv(lie.bracket(x, y), z);
        FieldElement rhs = -Bv(lie.bracket(x, z), y);
        if (!(lhs == rhs))
          throw HypothesisViolation("B([x,y],z) = -B(y,[x,z])", "(" + lie.labels[static_cast<std::size_t>(x)] + ", " +
                                                                   lie.labels[static_cast<std::size_t>(y)] + ", " +
                                                                   lie.labels[static_cast<std::size_t>(z)] + ")");
      }
  const int d = m + 2, x0 = m, xm = m + 1;
  std::vector<SparseVector> table(static_cast<std::size_t>(d * d * d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        SparseVector v;
        const std::array<int, 3> t{i, j, k};
        int zeros = 0, pos = -1;
        bool minus = false;
        for (int p = 0; p < 3; ++p) {
          if (t[static_cast<std::size_t>(p)] == xm) minus = true;
          if (t[static_cast<std::size_t>(p)] == x0) ++zeros, pos = p;
        }
        if (minus || zeros > 1) {
        } else if (zeros == 1) {
          // Rotate x0 to the front; rotations are even.
          int a = t[static_cast<std::size_t>((pos + 1) % 3)], b = t[static_cast<std::size_t>((pos + 2) % 3)];
          v = lie.bracket(a, b);
        } else {
          FieldElement s = Bv(lie.bracket(i, j), k);
          if (!s.is_zero()) v = {{xm, s}};
        }
        table[static_cast<std::size_t>((i * d + j) * d + k)] = std::move(v);
      }
  auto labels = lie.labels;
  labels.push_back("x0");
  labels.push_back("x-1");
  auto out = FiniteNLieAlgebra::from_ordered(f, d, 3, std::move(table), std::move(labels));
  out.metadata()["construction"] = "metric extension of " + lie.name;
  return out;
}

// ---------------------------------------------------------------- gamma matrices

namespace {

Matrix mat_mul(const Matrix &a, const Matrix &b) {
  Matrix c(a.rows(), b.cols(), a.field());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a.at(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!b.at(k, j).is_zero()) c.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return c;
}

Matrix mat_sub(Matrix a, const Matrix &b) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a.at(i, j) -= b.at(i, j);
  return a;
}

Matrix mat_lin(const std::vector<Matrix> &gs, const std::vector<FieldElement> &c) {
  Matrix out(4, 4, gs[0].field());
  for (std::size_t a = 0; a < gs.size(); ++a)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) out.at(i, j) += c[a] * gs[a].at(i, j);
  return out;
}

class GammaBracket final : public TriBracket {
public:
  GammaBracket() : TriBracket(Carrier::gamma_span()), gammas_(dirac_gammas()) {
    g5_ = mat_mul(mat_mul(gammas_[0], gammas_[1]), mat_mul(gammas_[2], gammas_[3]));
  }
  Element eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const override {
    const Matrix &x = gammas_.at(static_cast<std::size_t>(a.c.at(0)));
    const Matrix &y = gammas_.at(static_cast<std::size_t>(b.c.at(0)));
    const Matrix &z = gammas_.at(static_cast<std::size_t>(c.c.at(0)));
    Matrix xy = mat_sub(mat_mul(x, y), mat_mul(y, x));
    Matrix w = mat_mul(xy, g5_);
    Matrix r = mat_sub(mat_mul(w, z), mat_mul(z, w));
    // tr(g_a g_b) = 4 delta_ab
    const auto quarter = FieldElement::fraction(1, 4, field());
    std::vector<FieldElement> coeff;
    for (const auto &g : gammas_) {
      Matrix p = mat_mul(r, g);
      FieldElement tr = FieldElement::zero(field());
      for (std::size_t i = 0; i < 4; ++i) tr += p.at(i, i);
      coeff.push_back(quarter * tr);
    }
    if (!(mat_lin(gammas_, coeff) == r))
      throw Error("gamma bracket left the span of the gamma matrices");
    Element out(carrier_);
    for (std::size_t i = 0; i < coeff.size(); ++i) out.add_term(idx(static_cast<std::int64_t>(i)), coeff[i]);
    return out;
  }
  std::string form() const override { return "gamma"; }
  std::string name() const override { return "[[x,y]g5,z]"; }

private:
  std::vector<Matrix> gammas_;
  Matrix g5_{4, 4, FieldDescriptor::gaussian()};
};

} // namespace

std::vector<Matrix> dirac_gammas() {
  const auto F = FieldDescriptor::gaussian();
  const auto one = FieldElement::one(F), i = FieldElement::imaginary_unit(), zero = FieldElement::zero(F);
  // Pauli matrices
  const std::array<std::array<std::array<FieldElement, 2>, 2>, 3> s{{
      {{{zero, one}, {one, zero}}},
      {{{zero, -i}, {i, zero}}},
      {{{one, zero}, {zero, -one}}},
  }};
  std::vector<Matrix> out;
  for (int k = 0; k < 3; ++k) {
    // [[0, -i s_k], [i s_k, 0]]
    Matrix g(4, 4, F);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) {
        g.at(r, c + 2) = -i * s[static_cast<std::size_t>(k)][r][c];
        g.at(r + 2, c) = i * s[static_cast<std::size_t>(k)][r][c];
      }
    out.push_back(std::move(g));
  }
  Matrix g4(4, 4, F);
  g4.at(0, 0) = one;
  g4.at(1, 1) = one;
  g4.at(2, 2) = -one;
  g4.at(3, 3) = -one;
  out.push_back(std::move(g4));
  return out;
}

FiniteNLieAlgebra gamma_algebra() {
  GammaBracket b;
  auto r = tabulate(b, b.carrier()->finite_basis());
  if (auto *fail = std::get_if<ClosureFailure>(&r)) throw Error("gamma algebra not closed: " + fail->witness);
  auto alg = std::get<FiniteNLieAlgebra>(std::move(r));
  alg.metadata()["gamma_basis"] =
      "Dirac basis, Euclidean: g_k = [[0,-i s_k],[i s_k,0]] (k=1..3), g4 = diag(1,1,-1,-1); g5 = g1 g2 g3 g4";
  return alg;
}

// ---------------------------------------------------------------- structure-backed

StructureBracket::StructureBracket(std::shared_ptr<const FiniteNLieAlgebra> algebra)
    : TriBracket(Carrier::abstract(algebra->field(), algebra->dim(), {}, algebra->labels())),
      algebra_(std::move(algebra)) {
  if (algebra_->arity() != 3) throw ConfigurationError("structure bracket needs a ternary algebra");
}

Element StructureBracket::eval_basis(const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) const {
  const std::array<int, 3> t{static_cast<int>(a.c.at(0)), static_cast<int>(b.c.at(0)), static_cast<int>(c.c.at(0))};
  SparseVector scratch;
  return to_element(carrier_, algebra_->bracket(t, scratch));
}

// ---------------------------------------------------------------- tabulation

std::variant<FiniteNLieAlgebra, ClosureFailure> tabulate(const TriBracket &bracket,
                                                         const std::vector<BasisIndex> &basis) {
  const auto &carrier = *bracket.carrier();
  std::map<BasisIndex, int> pos;
  std::vector<std::string> labels;
  for (const auto &b : basis) {
    carrier.validate(b);
    if (!pos.emplace(b, static_cast<int>(pos.size())).second)
      throw ConfigurationError("basis lists " + carrier.render(b) + " twice");
    labels.push_back(carrier.render(b));
  }
  const std::size_t d = basis.size();
  std::vector<SparseVector> table(d * d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        Element e = bracket.eval_basis(basis[i], basis[j], basis[k]);
        SparseVector v;
        for (const auto &[ix, c] : e.terms()) {
          auto it = pos.find(ix);
          if (it == pos.end())
            return ClosureFailure{{basis[i], basis[j], basis[k]},
                                  ix,
                                  "[" + labels[i] + ", " + labels[j] + ", " + labels[k] + "] = " + e.to_string() +
                                      " leaves the span at " + carrier.render(ix)};
          v.emplace_back(it->second, c);
        }
        std::sort(v.begin(), v.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
        table[(i * d + j) * d + k] = std::move(v);
      }
  auto alg = FiniteNLieAlgebra::from_ordered(bracket.field(), static_cast<int>(d), 3, std::move(table), std::move(labels));
  alg.metadata()["bracket"] = bracket.name();
  alg.metadata()["carrier"] = carrier.describe();
  return alg;
}

FiniteNLieAlgebra lazy_group_algebra(const GroupBracket &bracket) {
  const auto &carrier = bracket.carrier();
  if (!carrier->is_finite()) throw ConfigurationError("lazy group algebra needs a finite group");
  auto basis = std::make_shared<const std::vector<BasisIndex>>(carrier->finite_basis());
  auto alpha = std::make_shared<std::vector<FieldElement>>();
  for (const auto &g : *basis) alpha->push_back(bracket.hom()(g));
  const auto torsion = carrier->torsion();
  const auto f = carrier->field();
  auto eval = [basis, alpha, torsion, f](std::span<const int> t) {
    const auto &g = (*basis)[static_cast<std::size_t>(t[0])], &h = (*basis)[static_cast<std::size_t>(t[1])],
               &w = (*basis)[static_cast<std::size_t>(t[2])];
    auto ord = [&](const BasisIndex &x, const BasisIndex &y, const BasisIndex &z) {
      int n = 0;
      for (std::size_t q = 0; q < torsion.size(); ++q) {
        std::int64_t r = (x.c[q] + y.c[q] - z.c[q]) % torsion[q];
        if (r < 0) r += torsion[q];
        n = n * static_cast<int>(torsion[q]) + static_cast<int>(r);
      }
      return n;
    };
    const FieldElement &ag = (*alpha)[static_cast<std::size_t>(t[0])], &ah = (*alpha)[static_cast<std::size_t>(t[1])],
                       &aw = (*alpha)[static_cast<std::size_t>(t[2])];
    std::array<std::pair<int, FieldElement>, 3> t3{{{ord(h, w, g), aw - ah}, {ord(g, w, h), ag - aw}, {ord(g, h, w), ah - ag}}};
    std::sort(t3.begin(), t3.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
    SparseVector acc;
    acc.reserve(3);
    for (auto &[i, c] : t3) {
      if (!acc.empty() && acc.back().first == i) {
        acc.back().second += c;
        if (acc.back().second.is_zero()) acc.pop_back();
      } else if (!c.is_zero()) {
        acc.emplace_back(i, std::move(c));
      }
    }
    return acc;
  };
  std::vector<std::string> labels;
  for (const auto &g : *basis) labels.push_back(carrier->render(g));
  auto alg = FiniteNLieAlgebra::lazy(f, static_cast<int>(basis->size()), 3, eval, std::move(labels));
  alg.metadata()["bracket"] = bracket.name();
  alg.metadata()["carrier"] = carrier->describe();
  return alg;
}

} // namespace nlie
