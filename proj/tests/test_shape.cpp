// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "vgrass/mat.hpp"
#include "vgrass/random.hpp"

using namespace vgrass;

TEST_CASE("union and product cardinalities", "[shape]") {
  IndexSet x = IndexSet::finite({std::string("x")}), y = IndexSet::finite({std::string("y")});
  REQUIRE(unite(x, y).cardinality() == Card{false, 2});
  IndexSet pq = IndexSet::finite({std::string("p"), std::string("q")});
  REQUIRE(unite(IndexSet::tail_n("a"), pq).cardinality().omega);
  IndexSet s = blocks(2, IndexSet::tail_n("n"));
  IndexSet dom = unite(s, s);
  REQUIRE(dom.strand_count() == 4);
  REQUIRE(dom.tags() == std::vector<std::string>{"n", "n'"});
  REQUIRE(product(IndexSet::range(2), IndexSet::finite({std::string("a"), std::string("b")})).cardinality() ==
          Card{false, 4});
  REQUIRE_THROWS_AS(product(IndexSet::tail_n("a"), IndexSet::tail_n("b")), ShapeError);
  REQUIRE(product(IndexSet::range(0), IndexSet::tail_n("a")).cardinality() == Card{false, 0});
}

TEST_CASE("index paths round trip", "[shape]") {
  IndexSet set = unite(blocks(3, IndexSet::tail_n("n")), product(IndexSet::tail_z("z"), IndexSet::range(2)));
  for (int s = 0; s < set.strand_count(); ++s)
    for (long long p : {0LL, 1LL, 7LL}) {
      Pos q{s, p};
      REQUIRE(locate(set, index_at(set, q)) == q);
    }
  Index i = Index::right(Index::pair(Index::at(-5), Index::at(1)));
  REQUIRE(locate(set, i) == Pos{4, -5});
  REQUIRE_THROWS_AS(locate(set, Index::left(Index::pair(Index::at(0), Index::at(-1)))), ShapeError);
}

TEST_CASE("relabeling matrices", "[shape]") {
  Ring q = Ring::rationals();
  IndexSet n = IndexSet::tail_n("n");

  Relabeling id = Relabeling::reshape(n, n);
  REQUIRE(relabel_matrix(id, q) == Matrix::identity(n, q));

  Relabeling hv = Relabeling::tail_embed(n, 2, 0);
  Matrix h = relabel_matrix(hv, q);
  REQUIRE(h.transpose() * h == Matrix::identity(n, q));
  Matrix proj = h * h.transpose();
  Matrix expect = Matrix::zero(hv.target(), hv.target(), q);
  expect.add_symbol(0, 0, 0, q.one());
  REQUIRE(proj == expect);

  Relabeling r = Relabeling::tail_embed(n, 1, 1);
  Matrix s = relabel_matrix(r, q);
  REQUIRE(s.transpose() * s == Matrix::identity(n, q));
  REQUIRE(s * s.transpose() == Matrix::identity(n, q) - Matrix::unit(n, n, q, {0, 0}, {0, 0}, q.one()));

  // dense check of hv: entry ((0,m),n) is 1 iff 2m = 2n
  for (long long a = 0; a < 6; ++a)
    for (long long b = 0; b < 6; ++b) {
      REQUIRE(h.entry({0, a}, {0, b}) == (a == b ? q.one() : q.zero()));
      REQUIRE(h.entry({1, a}, {0, b}).is_zero());
    }
  Relabeling odd = Relabeling::tail_embed(n, 3, 5);  // n -> 3n + 5: residue 2, offset 1
  REQUIRE(odd.apply({0, 4}) == Pos{2, 5});
}

TEST_CASE("relabeling conjugation is multiplicative", "[shape]") {
  Ring q = Ring::rationals();
  IndexSet src = IndexSet::range(4);
  IndexSet dst = unite(IndexSet::range(2), IndexSet::tail_n("n"));
  Relabeling r = Relabeling::finite_map(src, dst, {{0, {1, 0}}, {1, {2, 3}}, {2, {2, 0}}, {3, {0, 0}}});
  Matrix rm = relabel_matrix(r, q);
  REQUIRE(rm.transpose() * rm == Matrix::identity(src, q));
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    Matrix a = random_finite(rng, src, src, q, 1, 0.5), b = random_finite(rng, src, src, q, 1, 0.5);
    REQUIRE(push_forward(r, a * b) == push_forward(r, a) * push_forward(r, b));
  }
  REQUIRE_THROWS_AS(Relabeling::finite_map(src, dst, {{0, {1, 0}}, {1, {1, 0}}, {2, {2, 0}}, {3, {0, 0}}}),
                    ShapeError);
}

TEST_CASE("product commutation", "[shape]") {
  Ring q = Ring::rationals();
  IndexSet a = IndexSet::range(2), b = IndexSet::finite({std::string("u"), std::string("v"), std::string("w")});
  Relabeling c = Relabeling::commute(product(a, b));
  Matrix cm = relabel_matrix(c, q);
  REQUIRE(cm.transpose() * cm == Matrix::identity(product(a, b), q));
  REQUIRE(c.apply({1, 0}) == Pos{2, 0});  // (0,v) -> (v,0)
  Rng rng(2);
  Matrix x = random_finite(rng, a, a, q, 1, 0.8), y = random_finite(rng, b, b, q, 1, 0.8);
  REQUIRE(push_forward(c, kronecker(x, y)) == kronecker(y, x));
}

TEST_CASE("tail split is a ring isomorphism", "[shape]") {
  Ring q = Ring::rationals();
  IndexSet n = IndexSet::tail_n("n");
  TailSplit sp = split_tails(n, 2);
  REQUIRE(sp.target.strand_count() == 2);
  REQUIRE(sp.forward({0, 7}) == Pos{1, 3});
  REQUIRE(sp.backward({1, 3}) == Pos{0, 7});
  TailSplit twice = split_tails(sp.target, 2);
  REQUIRE(twice.target.strand_count() == 4);
  REQUIRE(twice.target.to_string() == "({0,1} x ({0,1} x N[n]))");

  REQUIRE(split_forward(Matrix::zero(n, n, q), sp, sp).is_zero());

  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    Matrix a = random_structured(rng, n, n, q, 2, 3), b = random_structured(rng, n, n, q, 2, 3);
    Matrix fa = split_forward(a, sp, sp), fb = split_forward(b, sp, sp);
    REQUIRE(split_forward(a * b, sp, sp) == fa * fb);
    REQUIRE(split_forward(a + b, sp, sp) == fa + fb);
    REQUIRE(split_backward(fa, sp, sp) == a);
    // dense agreement on a window
    for (long long r = 0; r < 10; ++r)
      for (long long c = 0; c < 10; ++c) REQUIRE(fa.entry(sp.forward({0, r}), sp.forward({0, c})) == a.entry({0, r}, {0, c}));
  }
  Matrix bad = Matrix::zero(sp.target, sp.target, q);
  bad.add_symbol(0, 0, 0, q.one());
  REQUIRE_THROWS_AS(split_backward(bad, sp, sp), MatError);
}
