#include <doctest.h>

#include "support.hpp"

using namespace t;

TEST_CASE("rational arithmetic is exact and canonical") {
  auto a = FieldElement::fraction(1, 2, Q()), b = FieldElement::fraction(1, 3, Q());
  CHECK((a + b) == FieldElement::fraction(5, 6, Q()));
  CHECK((a + b).to_string() == "5/6");
  CHECK(FieldElement::fraction(5, 6, Q()).inverse() == FieldElement::fraction(6, 5, Q()));
  CHECK(FieldElement::fraction(-4, -8, Q()).to_string() == "1/2");
  CHECK(FieldElement::fraction(3, -6, Q()).to_string() == "-1/2");
  CHECK(n(7).to_string() == "7");
}

TEST_CASE("prime field residues") {
  auto f3 = Fp(3), f5 = Fp(5);
  CHECK((n(2, f3) * n(2, f3)) == n(1, f3));
  CHECK(n(3, f5).inverse() == n(2, f5));
  CHECK(integer_embed(-2, f3).residue_value() == 1);
  CHECK(integer_embed(4, f3).residue_value() == 1);
  CHECK(FieldElement::fraction(1, 2, f5) == n(3, f5));
  CHECK(n(4, f5).pow(-1) == n(4, f5));
  CHECK_THROWS_AS(FieldDescriptor::prime(9), ConfigurationError);
  CHECK_THROWS_AS(FieldDescriptor::prime(1), ConfigurationError);
}

TEST_CASE("gaussian rationals") {
  auto i = FieldElement::imaginary_unit();
  CHECK((i * i) == FieldElement::from_int(-1, Qi()));
  auto z = FieldElement::gaussian(1, 1);
  CHECK(z.inverse() == FieldElement::gaussian(mpq_class(1, 2), mpq_class(-1, 2)));
  CHECK(z.inverse().to_string() == "1/2-1/2i");
  CHECK(FieldElement::parse("1/2-1/2i", Qi()) == z.inverse());
  CHECK(FieldElement::parse("i", Qi()) == i);
  CHECK(FieldElement::parse("-3", Qi()) == FieldElement::from_int(-3, Qi()));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(FieldElement::zero(Q()).inverse(), DivisionByZero);
  CHECK_THROWS_AS(n(1, Fp(7)) / n(0, Fp(7)), DivisionByZero);
  CHECK_THROWS_AS(n(1, Fp(3)) + n(1, Fp(5)), ConfigurationError);
  CHECK_THROWS_AS(n(1) * n(1, Fp(5)), ConfigurationError);
  CHECK_THROWS_AS(Fp(2).require_char_not_two("test"), HypothesisViolation);
  CHECK_NOTHROW(Fp(3).require_char_not_two("test"));
}

TEST_CASE("descriptor text") {
  for (auto d : {Q(), Qi(), Fp(5), Fp(2147483647)}) CHECK(FieldDescriptor::parse(d.name()) == d);
  CHECK(Fp(5).name() == "F_5");
  CHECK(Qi().name() == "Q(i)");
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(7);
  for (auto d : {Q(), Qi(), Fp(3), Fp(5), Fp(101)}) {
    CAPTURE(d.name());
    for (int k = 0; k < 300; ++k) {
      auto a = random_scalar(rng, d), b = random_scalar(rng, d), c = random_scalar(rng, d);
      CHECK(((a + b) + c) == (a + (b + c)));
      CHECK(((a * b) * c) == (a * (b * c)));
      CHECK((a * (b + c)) == (a * b + a * c));
      CHECK((a + b) == (b + a));
      CHECK((a * b) == (b * a));
      CHECK((a - a).is_zero());
      if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
      // canonical form survives a text round trip
      CHECK(FieldElement::parse(a.to_string(), d) == a);
      CHECK(FieldElement::parse(a.to_string(), d).to_string() == a.to_string());
    }
  }
}

TEST_CASE("integer embedding is a ring homomorphism") {
  for (auto d : {Q(), Qi(), Fp(3), Fp(7)})
    for (long long a = -12; a <= 12; ++a)
      for (long long b = -12; b <= 12; ++b) {
        CHECK(integer_embed(a + b, d) == integer_embed(a, d) + integer_embed(b, d));
        CHECK(integer_embed(a * b, d) == integer_embed(a, d) * integer_embed(b, d));
      }
}

TEST_CASE("big exponents stay exact") {
  auto two = n(2);
  auto big = two.pow(200);
  CHECK(big.to_string() == "1606938044258990275541962092341162602522202993782792835301376");
  CHECK((big * two.pow(-200)).is_one());
}
