// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "vgrass/mat.hpp"
#include "vgrass/random.hpp"

using namespace vgrass;

namespace {

// Compares a structured product against the dense product of windows. The inner window is wide
// enough that every contributing term is present, so agreement must be exact on the outer window.
void check_window_product(const Matrix& a, const Matrix& b, long long n) {
  long long inner = n + a.bandwidth() + b.bandwidth() + a.support_radius() + b.support_radius() + 4;
  Window wa = window(a, n, inner), wb = window(b, inner, n);
  Window dense = window_product(wa, wb, a.ring());
  Window structured = window(a * b, n, n);
  REQUIRE(dense.e.size() == structured.e.size());
  for (size_t i = 0; i < dense.e.size(); ++i) REQUIRE(dense.e[i] == structured.e[i]);
}

}  // namespace

TEST_CASE("shift times transpose on N and Z tails", "[mat]") {
  Ring q = Ring::rationals();
  IndexSet n = IndexSet::tail_n("n");
  Matrix s = Matrix::shift(n, n, q, 0, 0, 1);
  Matrix p = s * s.transpose();
  REQUIRE(p == Matrix::identity(n, q) - Matrix::unit(n, n, q, {0, 0}, {0, 0}, q.one()));
  REQUIRE(s.transpose() * s == Matrix::identity(n, q));
  check_window_product(s, s.transpose(), 20);

  IndexSet z = IndexSet::tail_z("z");
  Matrix u = Matrix::shift(z, z, q, 0, 0, 1);
  REQUIRE(u * u.transpose() == Matrix::identity(z, q));
  REQUIRE(u.transpose() * u == Matrix::identity(z, q));
}

TEST_CASE("unital bilinearity", "[mat]") {
  Ring q = Ring::rationals();
  IndexSet n = unite(IndexSet::tail_n("n"), IndexSet::range(2));
  Rng rng(1);
  Scalar lam = q.from_int(3), mu = q.from_rational(mpq_class(-1, 2));
  Matrix k = random_finite(rng, n, n, q, 3), l = random_finite(rng, n, n, q, 3);
  Matrix one = Matrix::identity(n, q);
  REQUIRE((lam * one + k) * (mu * one + l) == (lam * mu) * one + (lam * l + mu * k + k * l));
}

TEST_CASE("approximate equivalence and trace", "[mat]") {
  Ring q = Ring::rationals();
  IndexSet n = IndexSet::tail_n("n");
  Matrix one = Matrix::identity(n, q);
  Matrix e00 = Matrix::unit(n, n, q, {0, 0}, {0, 0}, q.one());
  REQUIRE(approx_equiv(one, one - e00));
  REQUIRE_FALSE(approx_equiv(Matrix::shift(n, n, q, 0, 0, 1), Matrix::zero(n, n, q)));
  REQUIRE(finite_trace(e00) == q.one());
  REQUIRE(finite_trace(Matrix::zero(n, n, q)).is_zero());
  REQUIRE_THROWS_AS(finite_trace(one), MatError);

  // cyclicity against an independent dense computation
  Rng rng(4);
  IndexSet six = IndexSet::range(6);
  for (int i = 0; i < 20; ++i) {
    auto [g, gi] = random_unit(rng, six, q);
    Matrix k = random_finite(rng, six, six, q, 1, 0.5);
    REQUIRE(g * gi == Matrix::identity(six, q));
    Window w = window_product(window_product(window(g, 1, 1), window(k, 1, 1), q), window(gi, 1, 1), q);
    Scalar dense_trace = q.zero();
    for (size_t j = 0; j < 6; ++j) dense_trace += w.at(j, j);
    REQUIRE(finite_trace(g * k * gi) == finite_trace(k));
    REQUIRE(dense_trace == finite_trace(k));
  }
}

TEST_CASE("kronecker products", "[mat]") {
  Ring q = Ring::rationals();
  IndexSet a = IndexSet::range(3), b = IndexSet::range(3);
  REQUIRE(kronecker(Matrix::identity(a, q), Matrix::identity(b, q)) == Matrix::identity(product(a, b), q));
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    Matrix k = random_finite(rng, a, a, q, 1, 0.7), l = random_finite(rng, b, b, q, 1, 0.7);
    REQUIRE(finite_trace(kronecker(k, l)) == finite_trace(k) * finite_trace(l));
    Matrix kl = kronecker(k, l);
    for (int r = 0; r < 9; ++r)
      for (int c = 0; c < 9; ++c)
        REQUIRE(kl.entry({r, 0}, {c, 0}) == k.entry({r / 3, 0}, {c / 3, 0}) * l.entry({r % 3, 0}, {c % 3, 0}));
  }
  IndexSet n = IndexSet::tail_n("n");
  Matrix e00 = Matrix::unit(IndexSet::range(2), IndexSet::range(2), q, {0, 0}, {0, 0}, q.one());
  Matrix kz = kronecker(e00, Matrix::shift(n, n, q, 0, 0, 1));
  for (long long r = 0; r < 8; ++r)
    for (long long c = 0; c < 8; ++c) {
      REQUIRE(kz.entry({0, r}, {0, c}) == (r == c + 1 ? q.one() : q.zero()));
      REQUIRE(kz.entry({1, r}, {1, c}).is_zero());
    }
  REQUIRE(kronecker(Matrix::identity(IndexSet::range(2), q), Matrix::identity(n, q)) ==
          Matrix::identity(blocks(2, n), q));
  Ring m2 = Ring::matrix(q, 2);
  REQUIRE_THROWS_AS(kronecker(Matrix::identity(a, m2), Matrix::identity(b, m2)), MatError);
}

TEST_CASE("structured algebra laws against dense windows", "[mat]") {
  Ring q = Ring::rationals();
  std::vector<IndexSet> shapes = {IndexSet::tail_n("n"), IndexSet::tail_z("z"),
                                  unite(IndexSet::tail_n("n"), IndexSet::range(2)),
                                  unite(blocks(2, IndexSet::tail_n("n")), IndexSet::tail_z("z"))};
  Rng rng(21);
  for (int i = 0; i < 500; ++i) {
    const IndexSet& s = shapes[i % shapes.size()];
    Matrix a = random_structured(rng, s, s, q, 2, 2), b = random_structured(rng, s, s, q, 2, 2),
           c = random_structured(rng, s, s, q, 2, 2);
    REQUIRE((a + b) * c == a * c + b * c);
    REQUIRE(a * (b * c) == (a * b) * c);
    REQUIRE((a * b).transpose() == b.transpose() * a.transpose());
    if (i % 10 == 0) check_window_product(a, b, 2 * (a.bandwidth() + b.bandwidth()) + 4 + 4);
    Matrix k = random_finite(rng, s, s, q, 3);
    REQUIRE((a * k).is_K());
    REQUIRE((k * a).is_K());
  }
}

TEST_CASE("matrix ring coefficients", "[mat]") {
  Ring m2 = Ring::matrix(Ring::rationals(), 2);
  IndexSet n = unite(IndexSet::tail_n("n"), IndexSet::range(1));
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    Matrix a = random_structured(rng, n, n, m2, 1, 2), b = random_structured(rng, n, n, m2, 1, 2),
           c = random_structured(rng, n, n, m2, 1, 2);
    REQUIRE(a * (b * c) == (a * b) * c);
    REQUIRE((a * b).transpose() == b.transpose() * a.transpose());
    check_window_product(a, b, 8);
  }
}

TEST_CASE("block assembly and extraction", "[mat]") {
  Ring q = Ring::rationals();
  IndexSet om = unite(IndexSet::tail_n("n"), IndexSet::range(1));
  Rng rng(8);
  Matrix a = random_structured(rng, om, om, q, 1, 2), b = random_structured(rng, om, om, q, 1, 2);
  Matrix c = random_structured(rng, om, om, q, 1, 2), d = random_structured(rng, om, om, q, 1, 2);
  IndexSet two = blocks(2, om);
  Matrix m = assemble(two, two, {{a, b}, {c, d}});
  REQUIRE(extract(m, 0, 2, om, om) == b);
  REQUIRE(extract(m, 2, 0, om, om) == c);
  Matrix sq = m * m;
  REQUIRE(extract(sq, 0, 0, om, om) == a * a + b * c);
  REQUIRE(extract(sq, 2, 2, om, om) == c * b + d * d);
  REQUIRE(direct_sum(a, d) == assemble(unite(om, om), unite(om, om),
                                        {{a, Matrix::zero(om, om, q)}, {Matrix::zero(om, om, q), d}}));
}

TEST_CASE("column finite operator", "[mat]") {
  Ring q = Ring::rationals();
  IndexSet n = IndexSet::tail_n("n");
  // the unilateral shift as a column rule
  ColumnFiniteOperator c(n, n, q, [&](const Pos& p) {
    return std::vector<std::pair<Pos, Scalar>>{{{0, p.pos + 1}, q.one()}};
  });
  Matrix e01 = Matrix::unit(n, n, q, {0, 0}, {0, 1}, q.one());
  REQUIRE(c.sandwich(e01) == Matrix::unit(n, n, q, {0, 1}, {0, 2}, q.one()));
  REQUIRE(c.sandwich(Matrix::zero(n, n, q)).is_zero());
  REQUIRE(c.gram({0, 3}, {0, 3}) == q.one());
  REQUIRE(c.gram({0, 3}, {0, 4}).is_zero());
  REQUIRE_THROWS_AS(c.apply(Matrix::identity(n, q)), MatError);
}
