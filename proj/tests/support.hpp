#pragma once

#include <initializer_list>
#include <random>
#include <utility>

#include "nlie/bracket.hpp"

namespace t {

using namespace nlie;

inline FieldDescriptor Q() { return FieldDescriptor::rationals(); }
inline FieldDescriptor Qi() { return FieldDescriptor::gaussian(); }
inline FieldDescriptor Fp(std::uint64_t p) { return FieldDescriptor::prime(p); }

inline FieldElement n(long long v, const FieldDescriptor &d = Q()) { return FieldElement::from_int(v, d); }

/// sum c t^m on a one-variable carrier
inline Element poly(const CarrierPtr &c, std::initializer_list<std::pair<std::int64_t, long long>> terms) {
  Element e(c);
  for (auto [m, v] : terms) e.add_term(idx(m), FieldElement::from_int(v, c->field()));
  return e;
}

inline Element mono(const CarrierPtr &c, std::int64_t m) { return Element::basis(c, idx(m)); }

inline FieldElement random_scalar(std::mt19937_64 &rng, const FieldDescriptor &d) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  switch (d.kind()) {
  case FieldKind::PrimeField:
    return FieldElement::from_int(num(rng), d);
  case FieldKind::Rationals:
    return FieldElement::fraction(num(rng), den(rng), d);
  default:
    return FieldElement::gaussian(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
  }
}

} // namespace t
