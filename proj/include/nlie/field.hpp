#pragma once

// Exact scalars over Q, Q(i) and F_p.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

#include "nlie/error.hpp"

namespace nlie {

enum class FieldKind { Rationals, GaussianRationals, PrimeField };

class FieldDescriptor {
public:
  static FieldDescriptor rationals() { return FieldDescriptor(FieldKind::Rationals, 0); }
  static FieldDescriptor gaussian() { return FieldDescriptor(FieldKind::GaussianRationals, 0); }
  /// Throws ConfigurationError unless p is a prime below 2^31.
  static FieldDescriptor prime(std::uint64_t p);

  FieldDescriptor() = default;

  FieldKind kind() const noexcept { return kind_; }
  std::uint32_t characteristic() const noexcept { return p_; }
  bool is_prime_field() const noexcept { return kind_ == FieldKind::PrimeField; }

  /// "Q", "Q(i)" or "F_p".
  std::string name() const;
  static FieldDescriptor parse(std::string_view text);

  /// Throws HypothesisViolation when the characteristic is 2.
  void require_char_not_two(const std::string &context) const;

  friend bool operator==(const FieldDescriptor &, const FieldDescriptor &) = default;

private:
  FieldDescriptor(FieldKind k, std::uint32_t p) : kind_(k), p_(p) {}
  FieldKind kind_ = FieldKind::Rationals;
  std::uint32_t p_ = 0;
};

struct GaussianRational {
  mpq_class re;
  mpq_class im;
};

class FieldElement {
public:
  /// Rational zero; exists so elements can live in standard containers.
  FieldElement();

  static FieldElement zero(const FieldDescriptor &d);
  static FieldElement one(const FieldDescriptor &d);
  static FieldElement from_int(long long n, const FieldDescriptor &d);
  static FieldElement from_mpz(const mpz_class &n, const FieldDescriptor &d);
  /// num/den in Q or Q(i); in F_p the image of num * den^{-1}.
  static FieldElement fraction(long long num, long long den, const FieldDescriptor &d);
  static FieldElement rational(const mpq_class &q, const FieldDescriptor &d);
  static FieldElement gaussian(const mpq_class &re, const mpq_class &im);
  static FieldElement imaginary_unit();
  static FieldElement residue(std::uint64_t r, const FieldDescriptor &d);

  const FieldDescriptor &descriptor() const noexcept { return desc_; }

  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  FieldElement operator-() const;
  FieldElement &operator+=(const FieldElement &o);
  FieldElement &operator-=(const FieldElement &o);
  FieldElement &operator*=(const FieldElement &o);
  FieldElement &operator/=(const FieldElement &o);
  friend FieldElement operator+(FieldElement a, const FieldElement &b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement &b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement &b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement &b) { return a /= b; }

  FieldElement inverse() const;
  /// Integer power; negative exponents go through inverse().
  FieldElement pow(long long e) const;

  /// Residue in [0, p); only valid for prime-field elements.
  std::uint64_t residue_value() const;
  const mpq_class &rational_value() const;
  const GaussianRational &gaussian_value() const;

  /// "p/q" (or "p" when q = 1), "a/b+c/di", or the decimal residue.
  std::string to_string() const;
  static FieldElement parse(std::string_view text, const FieldDescriptor &d);

  friend bool operator==(const FieldElement &a, const FieldElement &b);

private:
  FieldDescriptor desc_;
  std::variant<std::uint64_t, mpq_class, GaussianRational> value_;

  void check_same(const FieldElement &o) const;
};

inline FieldElement integer_embed(long long n, const FieldDescriptor &d) {
  return FieldElement::from_int(n, d);
}

} // namespace nlie
