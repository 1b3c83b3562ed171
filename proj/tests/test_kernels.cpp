#include <set>

#include <doctest.h>

#include "nlie/kernels.hpp"
#include "nlie/structure.hpp"
#include "support.hpp"

using namespace t;
using namespace nlie::kernels;

namespace {

FiniteNLieAlgebra quotient(std::int64_t p) {
  auto q = quotient_bracket(p);
  return std::get<FiniteNLieAlgebra>(tabulate(*q, q->carrier()->finite_basis()));
}

FiniteNLieAlgebra zp(std::uint64_t p) {
  auto f = Fp(p);
  auto G = Carrier::group(f, 0, {static_cast<std::int64_t>(p)});
  return std::get<FiniteNLieAlgebra>(tabulate(GroupBracket(GroupHom(G, {}, {n(1, f)})), G->finite_basis()));
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

} // namespace

TEST_CASE("serial and parallel FI scans agree") {
  std::vector<FiniteNLieAlgebra> algs{quotient(3), zp(5), gamma_algebra(),
                                      quotient(3).with_constant({0, 2, 4}, {{1, n(2, Fp(3))}}),
                                      quotient(3).with_entry({2, 1, 0}, {{3, n(1, Fp(3))}}),
                                      zp(3).with_constant({0, 1, 2}, {})};
  for (auto &L : algs)
    for (auto order : {TupleOrder::Full, TupleOrder::Sorted}) {
      auto a = fi_scan_serial(L, order), b = fi_scan_parallel(L, order);
      CHECK(a.evaluated == b.evaluated);
      CHECK(a.failures == b.failures);
      CHECK(a.witness == b.witness);
      CHECK(a.residual == b.residual);
      if (order == TupleOrder::Full) CHECK(a.evaluated == ipow(static_cast<std::uint64_t>(L.dim()), 5));
    }
}

TEST_CASE("a failing witness really fails") {
  auto L = quotient(3).with_constant({0, 2, 4}, {{1, n(2, Fp(3))}});
  auto s = fi_scan_serial(L, TupleOrder::Full);
  REQUIRE(s.witness);
  CHECK(s.failures > 0);
  CHECK(fi_residual(L, *s.witness) == s.residual);
  CHECK_FALSE(s.residual.empty());
}

TEST_CASE("residual matches a direct expansion") {
  auto L = zp(5);
  std::mt19937_64 rng(8);
  for (int k = 0; k < 200; ++k) {
    std::vector<int> t5(5);
    for (auto &x : t5) x = static_cast<int>(rng() % 5);
    SparseVector lhs;
    // [[x1,x2,x3], y2, y3]
    for (auto &[i, c] : L.bracket_of(std::vector<int>{t5[0], t5[1], t5[2]}))
      axpy(lhs, c, L.bracket_of(std::vector<int>{i, t5[3], t5[4]}));
    for (int pos = 0; pos < 3; ++pos) {
      for (auto &[i, c] : L.bracket_of(std::vector<int>{t5[pos], t5[3], t5[4]})) {
        std::vector<int> args{t5[0], t5[1], t5[2]};
        args[pos] = i;
        axpy(lhs, -c, L.bracket_of(args));
      }
    }
    CHECK(fi_residual(L, t5) == lhs);
  }
}

TEST_CASE("line counts and decoding") {
  CHECK(line_count(3, 6) == 364);
  CHECK(line_count(5, 10) == 2441406);
  CHECK(line_count(7, 14) == 113037178808ull);
  CHECK(line_count(2147483647u, 40) == UINT64_MAX);
  for (std::uint32_t p : {2u, 3u, 5u})
    for (int d : {1, 2, 3, 4}) {
      std::set<std::vector<std::uint32_t>> seen;
      std::vector<std::uint32_t> v(static_cast<std::size_t>(d));
      for (std::uint64_t o = 0; o < line_count(p, d); ++o) {
        decode_line(o, p, d, v.data());
        std::size_t lead = 0;
        while (lead < v.size() && v[lead] == 0) ++lead;
        REQUIRE(lead < v.size());
        CHECK(v[lead] == 1);
        for (auto x : v) CHECK(x < p);
        seen.insert(v);
      }
      CHECK(seen.size() == line_count(p, d));
    }
}

TEST_CASE("prime ad table matches left multiplication") {
  auto L = quotient(3);
  PrimeAdTable T(L);
  CHECK(T.count() == 15);
  std::mt19937_64 rng(6);
  std::size_t j = 0;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b, ++j) {
      std::vector<std::uint32_t> v(6), out(6);
      Vector fv;
      for (auto &x : v) {
        x = static_cast<std::uint32_t>(rng() % 3);
        fv.push_back(FieldElement::residue(x, Fp(3)));
      }
      T.apply(j, v.data(), out.data());
      auto ref = left_multiply(L, {a, b}, fv);
      for (int i = 0; i < 6; ++i) CHECK(out[static_cast<std::size_t>(i)] == ref[static_cast<std::size_t>(i)].residue_value());
    }
}

TEST_CASE("closure kernel agrees with the exact closure") {
  auto L = zp(5);
  PrimeAdTable T(L);
  std::vector<std::uint32_t> v(5);
  for (std::uint64_t o = 0; o < line_count(5, 5); ++o) {
    decode_line(o, 5, 5, v.data());
    Vector fv;
    for (auto x : v) fv.push_back(FieldElement::residue(x, Fp(5)));
    auto exact = ideal_closure(L, Subspace::span({fv}, 5, Fp(5)));
    std::vector<std::vector<std::uint32_t>> rows;
    bool full = closure_is_full(T, v.data(), &rows);
    CHECK(full == exact.is_full());
    if (!full) CHECK(rows.size() == exact.dim());
  }
}

TEST_CASE("serial and parallel line scans agree") {
  for (auto L : {quotient(3), zp(3), zp(5)}) {
    PrimeAdTable T(L);
    auto a = line_scan_serial(T), b = line_scan_parallel(T);
    CHECK(a.total == b.total);
    CHECK(a.first_proper == b.first_proper);
    if (!a.first_proper) CHECK(a.checked == a.total);
  }
  CHECK(max_threads() >= 1);
}
