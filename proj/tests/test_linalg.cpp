#include <doctest.h>

#include "support.hpp"

using namespace t;

namespace {

Matrix mat(std::vector<std::vector<long long>> rows, const FieldDescriptor &d) {
  std::vector<Vector> vs;
  for (auto &r : rows) {
    Vector v;
    for (auto x : r) v.push_back(n(x, d));
    vs.push_back(v);
  }
  return Matrix::from_rows(vs, rows.at(0).size(), d);
}

Vector vec(std::vector<long long> xs, const FieldDescriptor &d) {
  Vector v;
  for (auto x : xs) v.push_back(n(x, d));
  return v;
}

Subspace random_subspace(std::mt19937_64 &rng, std::size_t dim, std::size_t gens, const FieldDescriptor &d) {
  std::vector<Vector> vs;
  for (std::size_t k = 0; k < gens; ++k) {
    Vector v;
    for (std::size_t i = 0; i < dim; ++i) v.push_back(rng() % 3 == 0 ? random_scalar(rng, d) : FieldElement::zero(d));
    vs.push_back(v);
  }
  return Subspace::span(vs, dim, d);
}

} // namespace

TEST_CASE("rref examples") {
  CHECK(rref(mat({{2, 4}, {1, 2}}, Q())) == mat({{1, 2}}, Q()));
  CHECK(rref(Matrix::identity(3, Q())) == Matrix::identity(3, Q()));
  CHECK(rref(mat({{1, 1}, {1, 2}}, Fp(3))) == mat({{1, 0}, {0, 1}}, Fp(3)));
  // rank drops mod 3 but not over Q
  CHECK(rref(mat({{1, 2}, {2, 1}}, Fp(3))).rows() == 1);
  CHECK(rref(mat({{1, 2}, {2, 1}}, Q())).rows() == 2);
}

TEST_CASE("membership, sum, codimension") {
  auto s = Subspace::span({vec({1, 0, 0}, Q()), vec({0, 1, 0}, Q())}, 3, Q());
  CHECK(s.contains(vec({0, 0, 0}, Q())));
  CHECK(s.contains(vec({1, 0, 0}, Q())));
  CHECK_FALSE(s.contains(vec({0, 0, 1}, Q())));
  CHECK(s.sum(s) == s);
  CHECK(Subspace::full(3, Q()).codimension() == 0);
  auto e1 = Subspace::span({vec({1, 0, 0}, Q())}, 3, Q()), e2 = Subspace::span({vec({0, 1, 0}, Q())}, 3, Q());
  CHECK(e1.sum(e2).dim() == 2);
  CHECK(e1.sum(e2).codimension() == 1);
  CHECK_THROWS_AS(s.contains(vec({1, 0}, Q())), DimensionMismatch);
  CHECK_THROWS(e1.sum(Subspace::full(4, Q())));
}

TEST_CASE("zero subspace is a value") {
  Subspace z(4, Q());
  CHECK(z.is_zero());
  CHECK(z == Subspace::span({vec({0, 0, 0, 0}, Q())}, 4, Q()));
  CHECK(z.annihilator().rows() == 4);
}

TEST_CASE("nullspace") {
  auto m = mat({{1, 1, 1}}, Q());
  auto ns = nullspace(m);
  CHECK(ns.size() == 2);
  for (auto &v : ns) CHECK(is_zero(m.apply(v)));
}

TEST_CASE("echelon builder matches span") {
  std::mt19937_64 rng(3);
  for (auto d : {Q(), Fp(5)}) {
    EchelonBuilder eb(6, d);
    std::vector<Vector> seen;
    for (int k = 0; k < 10; ++k) {
      Vector v;
      for (int i = 0; i < 6; ++i) v.push_back(rng() % 2 ? random_scalar(rng, d) : FieldElement::zero(d));
      bool grew = eb.insert(v);
      bool was_member = Subspace::span(seen, 6, d).contains(v);
      CHECK(grew == !was_member);
      seen.push_back(v);
      CHECK(eb.subspace() == Subspace::span(seen, 6, d));
    }
  }
}

TEST_CASE("subspace properties on random instances") {
  std::mt19937_64 rng(11);
  for (auto d : {Q(), Qi(), Fp(3), Fp(7)}) {
    CAPTURE(d.name());
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t dim = 2 + rng() % 6;
      std::vector<Vector> rows;
      for (std::size_t r = 0; r < 1 + rng() % 6; ++r) {
        Vector v;
        for (std::size_t i = 0; i < dim; ++i) v.push_back(random_scalar(rng, d));
        rows.push_back(v);
      }
      auto M = Matrix::from_rows(rows, dim, d);
      auto R = rref(M);
      CHECK(rref(R) == R);
      auto S = Subspace::from_rref(R);
      for (auto &v : rows) CHECK(S.contains(v));
      for (std::size_t r = 0; r < R.rows(); ++r) CHECK(Subspace::span(rows, dim, d).contains(R.row(r)));
      CHECK(S.contains(S));

      auto A = random_subspace(rng, dim, 1 + rng() % dim, d);
      auto B = random_subspace(rng, dim, 1 + rng() % dim, d);
      CHECK(A.sum(B).dim() + A.intersection(B).dim() == A.dim() + B.dim());
      CHECK(A.sum(B).contains(A));
      CHECK(A.contains(A.intersection(B)));
      CHECK(B.contains(A.intersection(B)));
      // annihilator kills every row
      auto ann = A.annihilator();
      CHECK(ann.rows() == A.codimension());
      for (std::size_t r = 0; r < A.dim(); ++r) CHECK(is_zero(ann.apply(A.basis().row(r))));
    }
  }
}

TEST_CASE("sparse helpers") {
  auto d = Q();
  SparseVector acc;
  axpy(acc, n(2), {{1, n(1)}, {3, n(1)}});
  axpy(acc, n(-2), {{1, n(1)}});
  REQUIRE(acc.size() == 1);
  CHECK(acc[0].first == 3);
  CHECK(acc[0].second == n(2));
  CHECK(to_sparse(to_dense(acc, 5, d)) == acc);
}
