#include "nlie/carrier.hpp"

#include <algorithm>
#include <sstream>

namespace nlie {

namespace {

std::int64_t mod_positive(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::vector<std::int64_t> parse_int_list(const std::string &s) {
  std::vector<std::int64_t> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception &) {
      throw ConfigurationError("malformed integer '" + tok + "' in basis index");
    }
  }
  return out;
}

std::int64_t parse_int(const std::string &s, const std::string &whole) {
  try {
    std::size_t used = 0;
    auto v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw ConfigurationError("malformed basis index '" + whole + "'");
  }
}

bool is_laurent_like(const Carrier &c) {
  return c.shape() == CarrierShape::Laurent || c.shape() == CarrierShape::CyclicQuotient;
}

} // namespace

// ---------------------------------------------------------------- Carrier

CarrierPtr Carrier::laurent(const FieldDescriptor &f, int vars) {
  if (vars < 1) throw ConfigurationError("Laurent carrier needs at least one variable");
  auto c = std::shared_ptr<Carrier>(new Carrier());
  c->field_ = f;
  c->shape_ = CarrierShape::Laurent;
  c->vars_ = vars;
  return c;
}

CarrierPtr Carrier::group(const FieldDescriptor &f, int free_rank,
                          std::vector<std::int64_t> torsion) {
  if (free_rank < 0) throw ConfigurationError("negative free rank");
  for (auto m : torsion)
    if (m < 2) throw ConfigurationError("torsion moduli must be at least 2");
  if (free_rank == 0 && torsion.empty()) throw ConfigurationError("trivial group");
  auto c = std::shared_ptr<Carrier>(new Carrier());
  c->field_ = f;
  c->shape_ = CarrierShape::Group;
  c->free_rank_ = free_rank;
  c->torsion_ = std::move(torsion);
  return c;
}

CarrierPtr Carrier::cyclic_quotient(const FieldDescriptor &f, std::int64_t p) {
  if (p <= 2) throw HypothesisViolation("ch F = p > 2", "quotient requested with p = " + std::to_string(p));
  if (!f.is_prime_field() || static_cast<std::int64_t>(f.characteristic()) != p)
    throw ConfigurationError("cyclic quotient by t^p - t^-p needs the field F_" + std::to_string(p));
  auto c = std::shared_ptr<Carrier>(new Carrier());
  c->field_ = f;
  c->shape_ = CarrierShape::CyclicQuotient;
  c->vars_ = 1;
  c->quotient_p_ = p;
  return c;
}

CarrierPtr Carrier::abstract(const FieldDescriptor &f, int dim,
                             std::vector<std::vector<SparseVector>> products,
                             std::vector<std::string> labels) {
  if (dim < 1) throw ConfigurationError("abstract carrier needs positive dimension");
  if (!products.empty()) {
    if (products.size() != static_cast<std::size_t>(dim))
      throw DimensionMismatch("multiplication table has wrong row count");
    for (int i = 0; i < dim; ++i) {
      if (products[i].size() != static_cast<std::size_t>(dim))
        throw DimensionMismatch("multiplication table has wrong column count");
      for (int j = 0; j < dim; ++j)
        for (const auto &[k, v] : products[i][j]) {
          if (k < 0 || k >= dim) throw DimensionMismatch("product lands outside the basis");
          if (!(v.descriptor() == f)) throw ConfigurationError("product coefficient over wrong field");
        }
    }
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < i; ++j)
        if (products[i][j] != products[j][i])
          throw HypothesisViolation("commutative product",
                                    "e" + std::to_string(i) + "*e" + std::to_string(j));
  }
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(dim))
    throw DimensionMismatch("label count differs from dimension");
  auto c = std::shared_ptr<Carrier>(new Carrier());
  c->field_ = f;
  c->shape_ = CarrierShape::Abstract;
  c->abstract_dim_ = dim;
  c->products_ = std::move(products);
  c->labels_ = std::move(labels);
  if (c->has_product()) {
    // Associativity over the whole basis.
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        for (int d = 0; d < dim; ++d) {
          Element x = Element::basis(c, idx(a)), y = Element::basis(c, idx(b)),
                  z = Element::basis(c, idx(d));
          if (!((x * y) * z == x * (y * z)))
            throw HypothesisViolation("associative product", "triple (" + std::to_string(a) + "," +
                                                                 std::to_string(b) + "," +
                                                                 std::to_string(d) + ")");
        }
  }
  return c;
}

CarrierPtr Carrier::gamma_span() {
  auto c = std::shared_ptr<Carrier>(new Carrier());
  c->field_ = FieldDescriptor::gaussian();
  c->shape_ = CarrierShape::GammaSpan;
  c->abstract_dim_ = 4;
  c->labels_ = {"g1", "g2", "g3", "g4"};
  return c;
}

bool Carrier::has_product() const noexcept {
  switch (shape_) {
  case CarrierShape::Abstract:
    return !products_.empty();
  case CarrierShape::GammaSpan:
    return false;
  default:
    return true;
  }
}

bool Carrier::same_as(const Carrier &o) const {
  if (this == &o) return true;
  return field_ == o.field_ && shape_ == o.shape_ && vars_ == o.vars_ &&
         free_rank_ == o.free_rank_ && torsion_ == o.torsion_ && quotient_p_ == o.quotient_p_ &&
         abstract_dim_ == o.abstract_dim_ && products_ == o.products_;
}

BasisIndex Carrier::canonical(BasisIndex i) const {
  switch (shape_) {
  case CarrierShape::Group:
    for (std::size_t t = 0; t < torsion_.size(); ++t) {
      auto &r = i.c.at(static_cast<std::size_t>(free_rank_) + t);
      r = mod_positive(r, torsion_[t]);
    }
    break;
  case CarrierShape::CyclicQuotient: {
    const std::int64_t lo = 1 - quotient_p_;
    i.c.at(0) = mod_positive(i.c.at(0) - lo, 2 * quotient_p_) + lo;
    break;
  }
  default:
    break;
  }
  return i;
}

void Carrier::validate(const BasisIndex &i) const {
  auto bad = [&](const std::string &why) {
    throw ConfigurationError("invalid basis index for " + describe() + ": " + why);
  };
  switch (shape_) {
  case CarrierShape::Laurent:
    if (i.c.size() != static_cast<std::size_t>(vars_)) bad("exponent tuple length");
    break;
  case CarrierShape::Group:
    if (i.c.size() != static_cast<std::size_t>(free_rank_) + torsion_.size()) bad("tuple length");
    for (std::size_t t = 0; t < torsion_.size(); ++t) {
      auto r = i.c[static_cast<std::size_t>(free_rank_) + t];
      if (r < 0 || r >= torsion_[t]) bad("torsion residue out of range");
    }
    break;
  case CarrierShape::CyclicQuotient:
    if (i.c.size() != 1 || i.c[0] < 1 - quotient_p_ || i.c[0] > quotient_p_)
      bad("exponent outside {1-p..p}");
    break;
  case CarrierShape::Abstract:
  case CarrierShape::GammaSpan:
    if (i.c.size() != 1 || i.c[0] < 0 || i.c[0] >= abstract_dim_) bad("ordinal out of range");
    break;
  }
}

std::vector<std::pair<BasisIndex, FieldElement>> Carrier::multiply_basis(const BasisIndex &a,
                                                                         const BasisIndex &b) const {
  std::vector<std::pair<BasisIndex, FieldElement>> out;
  switch (shape_) {
  case CarrierShape::Laurent:
  case CarrierShape::Group:
  case CarrierShape::CyclicQuotient: {
    BasisIndex s = a;
    for (std::size_t k = 0; k < s.c.size(); ++k) s.c[k] += b.c.at(k);
    out.emplace_back(canonical(std::move(s)), FieldElement::one(field_));
    break;
  }
  case CarrierShape::Abstract: {
    if (products_.empty()) throw ConfigurationError("abstract carrier has no associative product");
    for (const auto &[k, v] : products_.at(static_cast<std::size_t>(a.c.at(0)))
                                  .at(static_cast<std::size_t>(b.c.at(0))))
      out.emplace_back(idx(k), v);
    break;
  }
  case CarrierShape::GammaSpan:
    throw ConfigurationError("the gamma-matrix span is not closed under the associative product");
  }
  return out;
}

std::optional<BasisIndex> Carrier::unit() const {
  switch (shape_) {
  case CarrierShape::Laurent:
    return BasisIndex{std::vector<std::int64_t>(static_cast<std::size_t>(vars_), 0)};
  case CarrierShape::Group:
    return BasisIndex{std::vector<std::int64_t>(static_cast<std::size_t>(free_rank_) + torsion_.size(), 0)};
  case CarrierShape::CyclicQuotient:
    return idx(0);
  default:
    return std::nullopt;
  }
}

bool Carrier::is_finite() const noexcept {
  switch (shape_) {
  case CarrierShape::Laurent:
    return false;
  case CarrierShape::Group:
    return free_rank_ == 0;
  default:
    return true;
  }
}

std::vector<BasisIndex> Carrier::finite_basis() const {
  if (!is_finite()) throw ConfigurationError(describe() + " has no finite basis");
  std::vector<BasisIndex> out;
  switch (shape_) {
  case CarrierShape::Group: {
    std::size_t total = 1;
    for (auto m : torsion_) total *= static_cast<std::size_t>(m);
    out.reserve(total);
    BasisIndex cur{std::vector<std::int64_t>(torsion_.size(), 0)};
    for (std::size_t n = 0; n < total; ++n) {
      out.push_back(cur);
      for (std::size_t t = torsion_.size(); t-- > 0;) {
        if (++cur.c[t] < torsion_[t]) break;
        cur.c[t] = 0;
      }
    }
    break;
  }
  case CarrierShape::CyclicQuotient:
    for (std::int64_t e = 1 - quotient_p_; e <= quotient_p_; ++e) out.push_back(idx(e));
    break;
  default:
    for (int i = 0; i < abstract_dim_; ++i) out.push_back(idx(i));
  }
  return out;
}

std::size_t Carrier::ordinal(const BasisIndex &i) const {
  switch (shape_) {
  case CarrierShape::Group: {
    if (free_rank_ != 0) throw ConfigurationError("ordinal on an infinite group");
    std::size_t n = 0;
    for (std::size_t t = 0; t < torsion_.size(); ++t)
      n = n * static_cast<std::size_t>(torsion_[t]) + static_cast<std::size_t>(i.c.at(t));
    return n;
  }
  case CarrierShape::CyclicQuotient:
    return static_cast<std::size_t>(i.c.at(0) - (1 - quotient_p_));
  case CarrierShape::Laurent:
    throw ConfigurationError("ordinal on an infinite carrier");
  default:
    return static_cast<std::size_t>(i.c.at(0));
  }
}

std::string Carrier::render(const BasisIndex &i) const {
  std::ostringstream os;
  switch (shape_) {
  case CarrierShape::Laurent: {
    if (vars_ == 1) {
      auto e = i.c.at(0);
      if (e == 0) return "1";
      if (e == 1) return "t";
      return "t^" + std::to_string(e);
    }
    bool first = true;
    for (int v = 0; v < vars_; ++v) {
      auto e = i.c.at(static_cast<std::size_t>(v));
      if (e == 0) continue;
      if (!first) os << '*';
      first = false;
      os << 't' << (v + 1);
      if (e != 1) os << '^' << e;
    }
    return first ? "1" : os.str();
  }
  case CarrierShape::Group: {
    os << "e(";
    for (int v = 0; v < free_rank_; ++v) os << (v ? "," : "") << i.c.at(static_cast<std::size_t>(v));
    if (!torsion_.empty()) {
      os << '|';
      for (std::size_t t = 0; t < torsion_.size(); ++t)
        os << (t ? "," : "") << i.c.at(static_cast<std::size_t>(free_rank_) + t);
    }
    os << ')';
    return os.str();
  }
  case CarrierShape::CyclicQuotient:
    return "tbar^" + std::to_string(i.c.at(0));
  default: {
    auto k = static_cast<std::size_t>(i.c.at(0));
    if (k < labels_.size()) return labels_[k];
    return "x" + std::to_string(k);
  }
  }
}

BasisIndex Carrier::parse_index(const std::string &text) const {
  std::string s;
  for (char ch : text)
    if (ch != ' ') s.push_back(ch);
  BasisIndex out;
  switch (shape_) {
  case CarrierShape::Laurent: {
    out.c.assign(static_cast<std::size_t>(vars_), 0);
    if (s == "1") break;
    std::stringstream ss(s);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
      if (factor.empty() || factor[0] != 't') throw ConfigurationError("malformed monomial '" + text + "'");
      auto caret = factor.find('^');
      std::string var = factor.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
      int v = 0;
      if (!var.empty()) v = static_cast<int>(parse_int(var, text)) - 1;
      else if (vars_ != 1) throw ConfigurationError("monomial '" + text + "' needs variable numbers");
      if (v < 0 || v >= vars_) throw ConfigurationError("variable out of range in '" + text + "'");
      std::int64_t e = caret == std::string::npos ? 1 : parse_int(factor.substr(caret + 1), text);
      out.c[static_cast<std::size_t>(v)] += e;
    }
    break;
  }
  case CarrierShape::Group: {
    if (s.size() < 3 || s.substr(0, 2) != "e(" || s.back() != ')')
      throw ConfigurationError("malformed group element '" + text + "'");
    std::string body = s.substr(2, s.size() - 3);
    auto bar = body.find('|');
    auto free = parse_int_list(body.substr(0, bar));
    std::vector<std::int64_t> tors;
    if (bar != std::string::npos) tors = parse_int_list(body.substr(bar + 1));
    if (free.size() != static_cast<std::size_t>(free_rank_) || tors.size() != torsion_.size())
      throw ConfigurationError("group element '" + text + "' has the wrong shape");
    out.c = free;
    out.c.insert(out.c.end(), tors.begin(), tors.end());
    break;
  }
  case CarrierShape::CyclicQuotient: {
    if (s.rfind("tbar^", 0) == 0) out = idx(parse_int(s.substr(5), text));
    else if (s == "tbar") out = idx(1);
    else if (s == "1") out = idx(0);
    else throw ConfigurationError("malformed quotient monomial '" + text + "'");
    break;
  }
  default: {
    for (std::size_t k = 0; k < labels_.size(); ++k)
      if (labels_[k] == s) return idx(static_cast<std::int64_t>(k));
    if (!s.empty() && s[0] == 'x') out = idx(parse_int(s.substr(1), text));
    else throw ConfigurationError("unknown basis label '" + text + "'");
  }
  }
  validate(out);
  return out;
}

std::string Carrier::describe() const {
  std::ostringstream os;
  switch (shape_) {
  case CarrierShape::Laurent:
    os << field_.name() << "[t^{+-1}]";
    if (vars_ > 1) os << " in " << vars_ << " variables";
    break;
  case CarrierShape::Group:
    os << field_.name() << "[Z^" << free_rank_;
    for (auto m : torsion_) os << " x Z_" << m;
    os << ']';
    break;
  case CarrierShape::CyclicQuotient:
    os << field_.name() << "[t^{+-1}]/(t^" << quotient_p_ << " - t^-" << quotient_p_ << ')';
    break;
  case CarrierShape::Abstract:
    os << "abstract " << abstract_dim_ << "-dimensional carrier over " << field_.name();
    break;
  case CarrierShape::GammaSpan:
    os << "span of Dirac gamma matrices over Q(i)";
    break;
  }
  return os.str();
}

// ---------------------------------------------------------------- Element

Element::Element(CarrierPtr carrier) : carrier_(std::move(carrier)) {
  if (!carrier_) throw ConfigurationError("element without carrier");
}

Element Element::basis(CarrierPtr carrier, const BasisIndex &i) {
  auto one = FieldElement::one(carrier->field());
  return basis(std::move(carrier), i, one);
}

Element Element::basis(CarrierPtr carrier, const BasisIndex &i, const FieldElement &coeff) {
  Element e(std::move(carrier));
  e.carrier_->validate(i);
  e.add_term(i, coeff);
  return e;
}

FieldElement Element::coefficient(const BasisIndex &i) const {
  auto it = terms_.find(i);
  return it == terms_.end() ? FieldElement::zero(field()) : it->second;
}

void Element::add_term(const BasisIndex &i, const FieldElement &c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(i, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Element::check_carrier(const Carrier &c) const {
  if (!carrier_->same_as(c))
    throw ConfigurationError("carrier mismatch: " + carrier_->describe() + " vs " + c.describe());
}

Element &Element::operator+=(const Element &o) {
  o.check_carrier(*carrier_);
  for (const auto &[i, c] : o.terms_) add_term(i, c);
  return *this;
}

Element &Element::operator-=(const Element &o) {
  o.check_carrier(*carrier_);
  for (const auto &[i, c] : o.terms_) add_term(i, -c);
  return *this;
}

Element Element::operator-() const {
  Element r = *this;
  for (auto &[i, c] : r.terms_) c = -c;
  return r;
}

Element operator*(const FieldElement &s, const Element &x) {
  Element r(x.carrier_);
  if (s.is_zero()) return r;
  for (const auto &[i, c] : x.terms_) r.terms_.emplace(i, s * c);
  return r;
}

Element operator*(const Element &x, const Element &y) {
  y.check_carrier(*x.carrier_);
  Element r(x.carrier_);
  for (const auto &[a, ca] : x.terms_)
    for (const auto &[b, cb] : y.terms_)
      for (const auto &[k, ck] : x.carrier_->multiply_basis(a, b)) r.add_term(k, ca * cb * ck);
  return r;
}

bool operator==(const Element &a, const Element &b) {
  return a.carrier_->same_as(*b.carrier_) && a.terms_ == b.terms_;
}

std::string Element::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[i, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    std::string mono = carrier_->render(i);
    if (c.is_one()) os << mono;
    else if (mono == "1") os << c.to_string();
    else os << c.to_string() << '*' << mono;
  }
  return os.str();
}

// ---------------------------------------------------------------- GroupHom

GroupHom::GroupHom(CarrierPtr group, std::vector<FieldElement> free_values,
                   std::vector<FieldElement> torsion_values)
    : carrier_(std::move(group)), free_(std::move(free_values)), torsion_(std::move(torsion_values)) {
  if (carrier_->shape() != CarrierShape::Group)
    throw ConfigurationError("Hom(G, F+) needs a group-algebra carrier");
  if (free_.size() != static_cast<std::size_t>(carrier_->free_rank()) ||
      torsion_.size() != carrier_->torsion().size())
    throw DimensionMismatch("homomorphism needs one value per group generator");
  const auto &f = carrier_->field();
  for (std::size_t t = 0; t < torsion_.size(); ++t) {
    if (!(torsion_[t].descriptor() == f) ) throw ConfigurationError("hom value over wrong field");
    if (!(torsion_[t] * FieldElement::from_int(carrier_->torsion()[t], f)).is_zero())
      throw HypothesisViolation("alpha(g)*m = 0 for torsion generators of order m",
                                "generator " + std::to_string(t) + " of order " +
                                    std::to_string(carrier_->torsion()[t]));
  }
  for (const auto &v : free_)
    if (!(v.descriptor() == f)) throw ConfigurationError("hom value over wrong field");
}

FieldElement GroupHom::operator()(const BasisIndex &g) const {
  const auto &f = carrier_->field();
  FieldElement s = FieldElement::zero(f);
  for (std::size_t k = 0; k < free_.size(); ++k)
    if (g.c.at(k) != 0) s += FieldElement::from_int(g.c[k], f) * free_[k];
  for (std::size_t t = 0; t < torsion_.size(); ++t) {
    auto r = g.c.at(free_.size() + t);
    if (r != 0) s += FieldElement::from_int(r, f) * torsion_[t];
  }
  return s;
}

bool GroupHom::is_zero() const {
  auto z = [](const FieldElement &x) { return x.is_zero(); };
  return std::all_of(free_.begin(), free_.end(), z) && std::all_of(torsion_.begin(), torsion_.end(), z);
}

// ---------------------------------------------------------------- Endomorphism

Endomorphism::Endomorphism(CarrierPtr carrier, Rule rule, std::string name)
    : carrier_(std::move(carrier)), rule_(std::move(rule)), name_(std::move(name)) {}

Element Endomorphism::apply_basis(const BasisIndex &i) const {
  const auto &f = carrier_->field();
  Element out(carrier_);
  std::visit(
      [&](const auto &r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, LaurentDerivation>) {
          auto v = static_cast<std::size_t>(r.var);
          auto m = i.c.at(v);
          if (m == 0) return;
          BasisIndex j = i;
          j.c[v] += r.power - 1;
          out.add_term(carrier_->canonical(std::move(j)), FieldElement::from_int(m, f));
        } else if constexpr (std::is_same_v<R, LaurentMonomialMap>) {
          FieldElement coeff = r.factor;
          BasisIndex j = i;
          for (std::size_t v = 0; v < j.c.size(); ++v) {
            if (i.c[v] != 0) coeff *= r.scale.at(v).pow(i.c[v]);
            j.c[v] = r.sign * i.c[v] + r.shift.at(v);
          }
          out.add_term(carrier_->canonical(std::move(j)), coeff);
        } else if constexpr (std::is_same_v<R, GroupNegation>) {
          BasisIndex j = i;
          for (auto &x : j.c) x = -x;
          out.add_term(carrier_->canonical(std::move(j)), FieldElement::one(f));
        } else if constexpr (std::is_same_v<R, GroupHomDerivation>) {
          out.add_term(i, r.hom(i));
        } else if constexpr (std::is_same_v<R, Table>) {
          auto it = r.images.find(i);
          if (it != r.images.end()) out = it->second;
        } else if constexpr (std::is_same_v<R, Identity>) {
          out.add_term(i, FieldElement::one(f));
        } else {
          out = r.fn(i);
        }
      },
      rule_);
  return out;
}

Element Endomorphism::operator()(const Element &x) const {
  x.check_carrier(*carrier_);
  Element out(carrier_);
  for (const auto &[i, c] : x.terms()) out += c * apply_basis(i);
  return out;
}

namespace {

void require_laurent(const CarrierPtr &c, const char *what) {
  if (!is_laurent_like(*c)) throw ConfigurationError(std::string(what) + " needs a Laurent carrier");
}

std::vector<FieldElement> repeat(const FieldElement &x, int n) {
  return std::vector<FieldElement>(static_cast<std::size_t>(n), x);
}

} // namespace

Endomorphism laurent_derivation(CarrierPtr c, std::int64_t power, int var) {
  require_laurent(c, "Laurent derivation");
  if (var < 0 || var >= c->vars()) throw ConfigurationError("derivation variable out of range");
  std::string name;
  if (c->vars() == 1) name = power == 0 ? "d/dt" : "t^" + std::to_string(power) + "*d/dt";
  else name = "t" + std::to_string(var + 1) + "^" + std::to_string(power) + "*d/dt" + std::to_string(var + 1);
  return Endomorphism(std::move(c), Endomorphism::LaurentDerivation{var, power}, name);
}

Endomorphism laurent_sign_involution(CarrierPtr c, std::vector<FieldElement> eps) {
  require_laurent(c, "sign involution");
  if (eps.size() != static_cast<std::size_t>(c->vars())) throw DimensionMismatch("one sign per variable");
  std::string name = "t^m -> (" + eps[0].to_string() + ")^m t^m";
  auto one = FieldElement::one(c->field());
  std::vector<std::int64_t> zero(static_cast<std::size_t>(c->vars()), 0);
  return Endomorphism(std::move(c), Endomorphism::LaurentMonomialMap{std::move(eps), 1, zero, one}, name);
}

Endomorphism laurent_sign_involution(CarrierPtr c, long long eps) {
  auto e = FieldElement::from_int(eps, c->field());
  int n = c->vars();
  return laurent_sign_involution(std::move(c), repeat(e, n));
}

Endomorphism laurent_flip_involution(CarrierPtr c, std::vector<FieldElement> lambda) {
  require_laurent(c, "flip involution");
  if (lambda.size() != static_cast<std::size_t>(c->vars())) throw DimensionMismatch("one lambda per variable");
  for (const auto &l : lambda)
    if (l.is_zero()) throw HypothesisViolation("lambda != 0", "flip involution");
  std::string name = "t^m -> (" + lambda[0].to_string() + ")^m t^-m";
  auto one = FieldElement::one(c->field());
  std::vector<std::int64_t> zero(static_cast<std::size_t>(c->vars()), 0);
  return Endomorphism(std::move(c), Endomorphism::LaurentMonomialMap{std::move(lambda), -1, zero, one}, name);
}

Endomorphism laurent_flip_involution(CarrierPtr c, const FieldElement &lambda) {
  int n = c->vars();
  return laurent_flip_involution(std::move(c), repeat(lambda, n));
}

Endomorphism laurent_scaling(CarrierPtr c, const FieldElement &scale) {
  require_laurent(c, "scaling map");
  int n = c->vars();
  std::string name = "t^m -> (" + scale.to_string() + ")^m t^m";
  auto one = FieldElement::one(c->field());
  return Endomorphism(std::move(c),
                      Endomorphism::LaurentMonomialMap{repeat(scale, n), 1,
                                                       std::vector<std::int64_t>(static_cast<std::size_t>(n), 0), one},
                      name);
}

Endomorphism laurent_shift(CarrierPtr c, std::int64_t shift, const FieldElement &factor) {
  require_laurent(c, "shift map");
  if (c->vars() != 1) throw ConfigurationError("shift map is defined for one variable");
  std::string name = "t^m -> " + factor.to_string() + "*t^(m" + (shift < 0 ? "" : "+") + std::to_string(shift) + ")";
  auto one = FieldElement::one(c->field());
  return Endomorphism(std::move(c), Endomorphism::LaurentMonomialMap{{one}, 1, {shift}, factor}, name);
}

Endomorphism group_negation(CarrierPtr c) {
  if (c->shape() != CarrierShape::Group) throw ConfigurationError("group negation needs a group algebra");
  return Endomorphism(std::move(c), Endomorphism::GroupNegation{}, "e_g -> e_-g");
}

Endomorphism group_hom_derivation(const GroupHom &hom) {
  return Endomorphism(hom.carrier(), Endomorphism::GroupHomDerivation{hom}, "alpha*");
}

Endomorphism identity_map(CarrierPtr c) {
  return Endomorphism(std::move(c), Endomorphism::Identity{}, "id");
}

Endomorphism zero_map(CarrierPtr c) { return Endomorphism(std::move(c), Endomorphism::Table{}, "0"); }

Endomorphism table_map(CarrierPtr c, std::map<BasisIndex, Element> images, std::string name) {
  for (const auto &[i, e] : images) {
    c->validate(i);
    e.check_carrier(*c);
  }
  return Endomorphism(std::move(c), Endomorphism::Table{std::move(images)}, std::move(name));
}

Endomorphism custom_map(CarrierPtr c, std::function<Element(const BasisIndex &)> fn, std::string name) {
  return Endomorphism(std::move(c), Endomorphism::Custom{std::move(fn)}, std::move(name));
}

// ---------------------------------------------------------------- Functional

Functional::Functional(CarrierPtr carrier, Rule rule, std::string name)
    : carrier_(std::move(carrier)), rule_(std::move(rule)), name_(std::move(name)) {}

FieldElement Functional::apply_basis(const BasisIndex &i) const {
  const auto &f = carrier_->field();
  return std::visit(
      [&](const auto &r) -> FieldElement {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, AlternatingSign>) {
          return FieldElement::from_int(i.c.at(static_cast<std::size_t>(r.var)) % 2 == 0 ? 1 : -1, f);
        } else if constexpr (std::is_same_v<R, ConstantOne>) {
          return FieldElement::one(f);
        } else if constexpr (std::is_same_v<R, ExponentValue>) {
          return FieldElement::from_int(i.c.at(static_cast<std::size_t>(r.var)), f);
        } else if constexpr (std::is_same_v<R, GroupHomFunctional>) {
          return r.hom(i);
        } else {
          auto it = r.values.find(i);
          return it == r.values.end() ? FieldElement::zero(f) : it->second;
        }
      },
      rule_);
}

FieldElement Functional::operator()(const Element &x) const {
  x.check_carrier(*carrier_);
  FieldElement s = FieldElement::zero(carrier_->field());
  for (const auto &[i, c] : x.terms()) s += c * apply_basis(i);
  return s;
}

Functional alternating_sign(CarrierPtr c, int var) {
  require_laurent(c, "alternating-sign functional");
  return Functional(std::move(c), Functional::AlternatingSign{var}, "t^m -> (-1)^m");
}

Functional constant_one(CarrierPtr c) {
  return Functional(std::move(c), Functional::ConstantOne{}, "t^m -> 1");
}

Functional exponent_value(CarrierPtr c, int var) {
  require_laurent(c, "exponent functional");
  return Functional(std::move(c), Functional::ExponentValue{var}, "t^m -> m");
}

Functional group_hom_functional(const GroupHom &hom) {
  return Functional(hom.carrier(), Functional::GroupHomFunctional{hom}, "phi_alpha");
}

Functional table_functional(CarrierPtr c, std::map<BasisIndex, FieldElement> values, std::string name) {
  for (const auto &[i, v] : values) {
    c->validate(i);
    if (!(v.descriptor() == c->field())) throw ConfigurationError("functional value over wrong field");
  }
  return Functional(std::move(c), Functional::Table{std::move(values)}, std::move(name));
}

Functional zero_functional(CarrierPtr c) { return Functional(std::move(c), Functional::Table{}, "0"); }

// ---------------------------------------------------------------- checks

namespace {

std::string pair_witness(const Carrier &c, const BasisIndex &a, const BasisIndex &b,
                         const Element &lhs, const Element &rhs) {
  return "(" + c.render(a) + ", " + c.render(b) + "): " + lhs.to_string() + " != " + rhs.to_string();
}

} // namespace

CheckReport check_derivation(const Endomorphism &d, const std::vector<BasisIndex> &window) {
  CheckReport rep{"derivation", "D(xy) = D(x)y + xD(y)", true, 0, 0, {}};
  const auto &c = d.carrier();
  for (std::size_t i = 0; i < window.size(); ++i)
    for (std::size_t j = i; j < window.size(); ++j) {
      Element a = Element::basis(c, window[i]), b = Element::basis(c, window[j]);
      Element lhs = d(a * b);
      Element rhs = d(a) * b + a * d(b);
      ++rep.evaluated;
      if (!(lhs == rhs)) rep.record_failure(pair_witness(*c, window[i], window[j], lhs, rhs));
    }
  return rep;
}

CheckReport check_involution(const Endomorphism &w, const std::vector<BasisIndex> &window) {
  CheckReport rep{"involution", "w(xy) = w(x)w(y) and w^2 = id", true, 0, 0, {}};
  const auto &c = w.carrier();
  for (std::size_t i = 0; i < window.size(); ++i) {
    Element a = Element::basis(c, window[i]);
    Element twice = w(w(a));
    ++rep.evaluated;
    if (!(twice == a))
      rep.record_failure("w^2(" + c->render(window[i]) + ") = " + twice.to_string());
    for (std::size_t j = i; j < window.size(); ++j) {
      Element b = Element::basis(c, window[j]);
      Element lhs = w(a * b), rhs = w(a) * w(b);
      ++rep.evaluated;
      if (!(lhs == rhs)) rep.record_failure(pair_witness(*c, window[i], window[j], lhs, rhs));
    }
  }
  return rep;
}

CheckReport check_anticommute(const Endomorphism &omega, const Endomorphism &delta,
                              const std::vector<BasisIndex> &window) {
  CheckReport rep{"anticommute", "omega*Delta + Delta*omega = 0", true, 0, 0, {}};
  const auto &c = omega.carrier();
  delta.carrier()->same_as(*c) ? void() : throw ConfigurationError("anticommute: carrier mismatch");
  for (const auto &i : window) {
    Element a = Element::basis(c, i);
    Element s = omega(delta(a)) + delta(omega(a));
    ++rep.evaluated;
    if (!s.is_zero())
      rep.record_failure("(omega Delta + Delta omega)(" + c->render(i) + ") = " + s.to_string());
  }
  return rep;
}

FunctionalConditionsReport check_functional_conditions(const Functional &alpha, const Functional &beta,
                                                       const Functional &gamma,
                                                       const Endomorphism &delta,
                                                       const Endomorphism &omega,
                                                       const std::vector<BasisIndex> &window) {
  FunctionalConditionsReport rep;
  rep.alpha = {"alpha(ab) = 0", "alpha(ab) = 0", true, 0, 0, {}};
  rep.beta = {"beta([a,b]_Delta) = 0", "beta(a Delta(b) - b Delta(a)) = 0", true, 0, 0, {}};
  rep.gamma = {"gamma condition", "gamma(a Delta b - b Delta a) = gamma(omega(a) Delta b - omega(b) Delta a)",
               true, 0, 0, {}};
  const auto &c = delta.carrier();
  for (std::size_t i = 0; i < window.size(); ++i)
    for (std::size_t j = 0; j < window.size(); ++j) {
      Element a = Element::basis(c, window[i]), b = Element::basis(c, window[j]);
      std::string where = "(" + c->render(window[i]) + ", " + c->render(window[j]) + ")";
      FieldElement va = alpha(a * b);
      ++rep.alpha.evaluated;
      if (!va.is_zero()) rep.alpha.record_failure(where + ": alpha(ab) = " + va.to_string());
      Element lie = a * delta(b) - b * delta(a);
      FieldElement vb = beta(lie);
      ++rep.beta.evaluated;
      if (!vb.is_zero()) rep.beta.record_failure(where + ": beta = " + vb.to_string());
      FieldElement lhs = gamma(lie);
      FieldElement rhs = gamma(omega(a) * delta(b) - omega(b) * delta(a));
      ++rep.gamma.evaluated;
      if (!(lhs == rhs))
        rep.gamma.record_failure(where + ": " + lhs.to_string() + " != " + rhs.to_string());
    }
  return rep;
}

std::vector<InvolutionFamily> classify_involutions(const CarrierPtr &laurent) {
  if (laurent->shape() != CarrierShape::Laurent || laurent->vars() != 1)
    throw ConfigurationError("involution classification is for F[t^{+-1}] in one variable");
  laurent->field().require_char_not_two("involutions of F[t^{+-1}]");
  const auto f = laurent->field();
  std::vector<InvolutionFamily> out;
  out.push_back({"sign", "t^m -> eps^m t^m, eps = +-1",
                 [laurent](const FieldElement &eps) {
                   auto one = FieldElement::one(laurent->field());
                   if (!(eps == one) && !(eps == -one))
                     throw HypothesisViolation("eps = +-1", "sign family parameter " + eps.to_string());
                   return laurent_sign_involution(laurent, std::vector<FieldElement>{eps});
                 },
                 [f](const FieldElement &eps) {
                   auto one = FieldElement::one(f);
                   return eps == one || eps == -one;
                 }});
  out.push_back({"flip", "t^m -> lambda^m t^-m, lambda != 0",
                 [laurent](const FieldElement &lambda) { return laurent_flip_involution(laurent, lambda); },
                 [](const FieldElement &lambda) { return !lambda.is_zero(); }});
  return out;
}

std::vector<BasisIndex> laurent_window(std::int64_t lo, std::int64_t hi) {
  std::vector<BasisIndex> out;
  for (auto m = lo; m <= hi; ++m) out.push_back(idx(m));
  return out;
}

} // namespace nlie
