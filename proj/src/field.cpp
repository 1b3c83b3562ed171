#include "nlie/field.hpp"

#include <cctype>

namespace nlie {

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

std::uint64_t reduce(long long n, std::uint32_t p) {
  long long r = n % static_cast<long long>(p);
  return static_cast<std::uint64_t>(r < 0 ? r + p : r);
}

std::uint64_t reduce(const mpz_class &n, std::uint32_t p) {
  mpz_class r = n % p;
  if (r < 0) r += p;
  return r.get_ui();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint32_t p) {
  if (a == 0) throw DivisionByZero();
  // Fermat: a^(p-2).
  std::uint64_t result = 1, base = a % p, e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return result;
}

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ConfigurationError("empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw ConfigurationError("malformed rational literal '" + s + "'");
  if (q.get_den() == 0) throw DivisionByZero();
  q.canonicalize();
  return q;
}

std::string render_rational(const mpq_class &q) { return q.get_str(10); }

} // namespace

FieldDescriptor FieldDescriptor::prime(std::uint64_t p) {
  if (p >= (1ull << 31) || !is_prime(p))
    throw ConfigurationError("prime field characteristic must be a prime below 2^31, got " +
                             std::to_string(p));
  return FieldDescriptor(FieldKind::PrimeField, static_cast<std::uint32_t>(p));
}

std::string FieldDescriptor::name() const {
  switch (kind_) {
  case FieldKind::Rationals:
    return "Q";
  case FieldKind::GaussianRationals:
    return "Q(i)";
  case FieldKind::PrimeField:
    return "F_" + std::to_string(p_);
  }
  return "?";
}

FieldDescriptor FieldDescriptor::parse(std::string_view text) {
  if (text == "Q") return rationals();
  if (text == "Q(i)") return gaussian();
  if (text.size() > 2 && text.substr(0, 2) == "F_") {
    std::uint64_t p = 0;
    for (char c : text.substr(2)) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ConfigurationError("malformed field name '" + std::string(text) + "'");
      p = p * 10 + static_cast<std::uint64_t>(c - '0');
      if (p >= (1ull << 31)) break;
    }
    return prime(p);
  }
  throw ConfigurationError("unknown field '" + std::string(text) + "'");
}

void FieldDescriptor::require_char_not_two(const std::string &context) const {
  if (kind_ == FieldKind::PrimeField && p_ == 2) throw HypothesisViolation("ch F != 2", context);
}

FieldElement::FieldElement() : desc_(FieldDescriptor::rationals()), value_(mpq_class(0)) {}

FieldElement FieldElement::zero(const FieldDescriptor &d) { return from_int(0, d); }
FieldElement FieldElement::one(const FieldDescriptor &d) { return from_int(1, d); }

FieldElement FieldElement::from_int(long long n, const FieldDescriptor &d) {
  FieldElement e;
  e.desc_ = d;
  switch (d.kind()) {
  case FieldKind::Rationals:
    e.value_ = mpq_class(mpz_class(static_cast<long>(n)));
    break;
  case FieldKind::GaussianRationals:
    e.value_ = GaussianRational{mpq_class(mpz_class(static_cast<long>(n))), mpq_class(0)};
    break;
  case FieldKind::PrimeField:
    e.value_ = reduce(n, d.characteristic());
    break;
  }
  return e;
}

FieldElement FieldElement::from_mpz(const mpz_class &n, const FieldDescriptor &d) {
  FieldElement e;
  e.desc_ = d;
  switch (d.kind()) {
  case FieldKind::Rationals:
    e.value_ = mpq_class(n);
    break;
  case FieldKind::GaussianRationals:
    e.value_ = GaussianRational{mpq_class(n), mpq_class(0)};
    break;
  case FieldKind::PrimeField:
    e.value_ = reduce(n, d.characteristic());
    break;
  }
  return e;
}

FieldElement FieldElement::fraction(long long num, long long den, const FieldDescriptor &d) {
  if (den == 0) throw DivisionByZero();
  return from_int(num, d) / from_int(den, d);
}

FieldElement FieldElement::rational(const mpq_class &q, const FieldDescriptor &d) {
  return from_mpz(q.get_num(), d) / from_mpz(q.get_den(), d);
}

FieldElement FieldElement::gaussian(const mpq_class &re, const mpq_class &im) {
  FieldElement e;
  e.desc_ = FieldDescriptor::gaussian();
  GaussianRational g{re, im};
  g.re.canonicalize();
  g.im.canonicalize();
  e.value_ = std::move(g);
  return e;
}

FieldElement FieldElement::imaginary_unit() { return gaussian(0, 1); }

FieldElement FieldElement::residue(std::uint64_t r, const FieldDescriptor &d) {
  if (!d.is_prime_field()) throw ConfigurationError("residue requires a prime field");
  FieldElement e;
  e.desc_ = d;
  e.value_ = r % d.characteristic();
  return e;
}

bool FieldElement::is_zero() const noexcept {
  switch (value_.index()) {
  case 0:
    return std::get<0>(value_) == 0;
  case 1:
    return sgn(std::get<1>(value_)) == 0;
  default: {
    const auto &g = std::get<2>(value_);
    return sgn(g.re) == 0 && sgn(g.im) == 0;
  }
  }
}

bool FieldElement::is_one() const noexcept {
  switch (value_.index()) {
  case 0:
    return std::get<0>(value_) == 1;
  case 1:
    return std::get<1>(value_) == 1;
  default: {
    const auto &g = std::get<2>(value_);
    return g.re == 1 && sgn(g.im) == 0;
  }
  }
}

void FieldElement::check_same(const FieldElement &o) const {
  if (!(desc_ == o.desc_))
    throw ConfigurationError("field descriptor mismatch: " + desc_.name() + " vs " +
                             o.desc_.name());
}

FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  switch (r.value_.index()) {
  case 0: {
    auto &v = std::get<0>(r.value_);
    v = v == 0 ? 0 : desc_.characteristic() - v;
    break;
  }
  case 1:
    std::get<1>(r.value_) = -std::get<1>(r.value_);
    break;
  default: {
    auto &g = std::get<2>(r.value_);
    g.re = -g.re;
    g.im = -g.im;
  }
  }
  return r;
}

FieldElement &FieldElement::operator+=(const FieldElement &o) {
  check_same(o);
  switch (value_.index()) {
  case 0: {
    auto &v = std::get<0>(value_);
    v = (v + std::get<0>(o.value_)) % desc_.characteristic();
    break;
  }
  case 1:
    std::get<1>(value_) += std::get<1>(o.value_);
    break;
  default: {
    auto &g = std::get<2>(value_);
    const auto &h = std::get<2>(o.value_);
    g.re += h.re;
    g.im += h.im;
  }
  }
  return *this;
}

FieldElement &FieldElement::operator-=(const FieldElement &o) { return *this += -o; }

FieldElement &FieldElement::operator*=(const FieldElement &o) {
  check_same(o);
  switch (value_.index()) {
  case 0: {
    auto &v = std::get<0>(value_);
    v = v * std::get<0>(o.value_) % desc_.characteristic();
    break;
  }
  case 1:
    std::get<1>(value_) *= std::get<1>(o.value_);
    break;
  default: {
    auto &g = std::get<2>(value_);
    const auto &h = std::get<2>(o.value_);
    mpq_class re = g.re * h.re - g.im * h.im;
    mpq_class im = g.re * h.im + g.im * h.re;
    g.re = std::move(re);
    g.im = std::move(im);
  }
  }
  return *this;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw DivisionByZero();
  FieldElement r = *this;
  switch (r.value_.index()) {
  case 0:
    std::get<0>(r.value_) = inv_mod(std::get<0>(value_), desc_.characteristic());
    break;
  case 1:
    std::get<1>(r.value_) = 1 / std::get<1>(value_);
    break;
  default: {
    const auto &g = std::get<2>(value_);
    mpq_class norm = g.re * g.re + g.im * g.im;
    auto &out = std::get<2>(r.value_);
    out.re = g.re / norm;
    out.im = -g.im / norm;
  }
  }
  return r;
}

FieldElement &FieldElement::operator/=(const FieldElement &o) {
  check_same(o);
  return *this *= o.inverse();
}

FieldElement FieldElement::pow(long long e) const {
  if (e < 0) return inverse().pow(-e);
  FieldElement result = one(desc_), base = *this;
  while (e) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

std::uint64_t FieldElement::residue_value() const {
  if (value_.index() != 0) throw ConfigurationError("not a prime-field element");
  return std::get<0>(value_);
}

const mpq_class &FieldElement::rational_value() const {
  if (value_.index() != 1) throw ConfigurationError("not a rational element");
  return std::get<1>(value_);
}

const GaussianRational &FieldElement::gaussian_value() const {
  if (value_.index() != 2) throw ConfigurationError("not a Gaussian rational element");
  return std::get<2>(value_);
}

std::string FieldElement::to_string() const {
  switch (value_.index()) {
  case 0:
    return std::to_string(std::get<0>(value_));
  case 1:
    return render_rational(std::get<1>(value_));
  default: {
    const auto &g = std::get<2>(value_);
    std::string s = render_rational(g.re);
    s += sgn(g.im) < 0 ? "-" : "+";
    s += render_rational(abs(g.im));
    s += "i";
    return s;
  }
  }
}

FieldElement FieldElement::parse(std::string_view text, const FieldDescriptor &d) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ConfigurationError("empty scalar literal");
  switch (d.kind()) {
  case FieldKind::PrimeField: {
    mpq_class q = parse_rational(s);
    return rational(q, d);
  }
  case FieldKind::Rationals:
    return FieldElement::rational(parse_rational(s), d);
  case FieldKind::GaussianRationals: {
    if (s.back() != 'i') return gaussian(parse_rational(s), 0);
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
      if (body[k] == '+' || body[k] == '-') {
        split = k;
        break;
      }
    auto imag_part = [](const std::string &t) -> mpq_class {
      if (t.empty() || t == "+") return 1;
      if (t == "-") return -1;
      return parse_rational(t[0] == '+' ? t.substr(1) : t);
    };
    if (split == std::string::npos) return gaussian(0, imag_part(body));
    return gaussian(parse_rational(body.substr(0, split)), imag_part(body.substr(split)));
  }
  }
  throw ConfigurationError("unreachable field kind");
}

bool operator==(const FieldElement &a, const FieldElement &b) {
  if (!(a.desc_ == b.desc_)) return false;
  switch (a.value_.index()) {
  case 0:
    return std::get<0>(a.value_) == std::get<0>(b.value_);
  case 1:
    return std::get<1>(a.value_) == std::get<1>(b.value_);
  default: {
    const auto &g = std::get<2>(a.value_);
    const auto &h = std::get<2>(b.value_);
    return g.re == h.re && g.im == h.im;
  }
  }
}

} // namespace nlie
