// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "vgrass/random.hpp"
#include "vgrass/stab.hpp"

using namespace vgrass;

namespace {

IndexSet nat() { return IndexSet::tail_n("n"); }

Matrix e(const Ring& ring, long long r, long long c) { return Matrix::unit(nat(), nat(), ring, {0, r}, {0, c}, ring.one()); }

}  // namespace

TEST_CASE("stabilization operator columns", "[stab]") {
  TrigAngle a = TrigAngle::symbolic();
  const Ring& r = a.ring;
  Scalar s = a.s, t = a.t;
  ColumnFiniteOperator c = cstab(a);
  // the expected matrix, rows 0..4 of columns 0..3
  std::vector<std::vector<Scalar>> shown = {{s, t * s, t * t * s, t * t * t * s},
                                            {-t, s * s, t * s * s, t * t * s * s},
                                            {r.zero(), -t, s * s, t * s * s},
                                            {r.zero(), r.zero(), -t, s * s},
                                            {r.zero(), r.zero(), r.zero(), -t}};
  for (long long i = 0; i < 5; ++i)
    for (long long j = 0; j < 4; ++j) REQUIRE(c.entry({0, i}, {0, j}) == shown[i][j]);
  REQUIRE(c.entry({0, 9}, {0, 3}).is_zero());
}

TEST_CASE("stabilization operator is an isometry", "[stab]") {
  TrigAngle a = TrigAngle::symbolic();
  ColumnFiniteOperator c = cstab(a);
  // independent dense product on a window: columns 0..39 live in rows 0..40
  const long long n = 40;
  std::vector<std::vector<Scalar>> dense(n + 1, std::vector<Scalar>(n, a.ring.zero()));
  for (long long j = 0; j < n; ++j)
    for (const auto& [p, v] : c.column({0, j})) dense[p.pos][j] = v;
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j) {
      Scalar acc = a.ring.zero();
      for (long long k = 0; k <= n; ++k) acc += dense[k][i] * dense[k][j];
      REQUIRE(acc == (i == j ? a.ring.one() : a.ring.zero()));
      REQUIRE(c.gram({0, i}, {0, j}) == acc);
    }
  REQUIRE_THROWS_AS(cstab(TrigAngle{Ring::rationals(), Ring::rationals().one(), Ring::rationals().one()}), StabError);
}

TEST_CASE("stabilization endpoints and multiplicativity", "[stab]") {
  Ring q = Ring::rationals();
  Rng rng(41);
  ColumnFiniteOperator c0 = cstab(TrigAngle::zero(q)), c1 = cstab(TrigAngle::quarter(q));
  for (int i = 0; i < 20; ++i) {
    Matrix k = random_finite(rng, nat(), nat(), q, 5);
    REQUIRE(c0.sandwich(k) == k);
  }
  for (long long n = 0; n < 5; ++n)
    for (long long m = 0; m < 5; ++m) REQUIRE(c1.sandwich(e(q, n, m)) == e(q, n + 1, m + 1));

  TrigAngle a = TrigAngle::symbolic();
  ColumnFiniteOperator c = cstab(a);
  ColumnFiniteOperator rational = cstab(TrigAngle::exact(q, q.from_rational(mpq_class(3, 5)), q.from_rational(mpq_class(4, 5))));
  for (int i = 0; i < 100; ++i) {
    Matrix k = random_finite(rng, nat(), nat(), q, 4), l = random_finite(rng, nat(), nat(), q, 4);
    Matrix kt = lift_matrix(k, a.ring), lt = lift_matrix(l, a.ring);
    REQUIRE(c.sandwich(kt * lt) == c.sandwich(kt) * c.sandwich(lt));
    if (i % 10 == 0) REQUIRE(rational.sandwich(k * l) == rational.sandwich(k) * rational.sandwich(l));
  }
}

TEST_CASE("odd quantization worked example", "[stab]") {
  TrigAngle a = TrigAngle::symbolic();
  const Ring& r = a.ring;
  Scalar s = a.s, t = a.t;
  WedgeVector w = WedgeVector::basis(r, {0, 1}, r.one());
  WedgeVector img = qu1_apply(cstab(a), w);
  WedgeVector expect{r, {}};
  expect.add({0, 1}, s);
  expect.add({0, 2}, -(s * t));
  expect.add({1, 2}, t * t);
  REQUIRE(img == expect);

  auto v = v_map(img);
  REQUIRE(v.size() == 3);
  REQUIRE(v.at(3) == s);
  REQUIRE(v.at(5) == -(s * t));
  REQUIRE(v.at(6) == t * t);
  REQUIRE(v_index(3) == Wedge{0, 1});

  Ring q = Ring::rationals();
  WedgeVector id = WedgeVector::basis(q, {4, 1, 7}, q.one());
  REQUIRE(id.terms.at({1, 4, 7}) == q.from_int(-1));
  REQUIRE(qu1_apply(cstab(TrigAngle::zero(q)), id) == id);
  REQUIRE(WedgeVector::basis(q, {2, 2}, q.one()).terms.empty());
}

TEST_CASE("odd quantization is functorial", "[stab]") {
  TrigAngle a = TrigAngle::symbolic();
  ColumnFiniteOperator c = cstab(a), d = cstab_signed(a);
  ColumnFiniteOperator cd = compose(c, d);
  std::set<long long> codes;
  for (long long i = 0; i < 8; ++i)
    for (long long j = i + 1; j < 8; ++j)
      for (long long k = j + 1; k <= 8; ++k) {
        Wedge w = k < 8 ? Wedge{i, j, k} : Wedge{i, j};
        WedgeVector x = WedgeVector::basis(a.ring, w, a.ring.one());
        REQUIRE(qu1_apply(c, qu1_apply(d, x)) == qu1_apply(cd, x));
        REQUIRE(codes.insert(v_code(w)).second);
        REQUIRE(v_index(v_code(w)) == w);
      }
}

TEST_CASE("quantized homotopy between identity and hv", "[stab]") {
  Ring q = Ring::rationals();
  Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    Matrix k = random_finite(rng, nat(), nat(), q, 6);
    REQUIRE(hv_homotopy(k, TrigAngle::zero(q)) == k);
    REQUIRE(hv_homotopy(k, TrigAngle::quarter(q)) == hv_conjugation(k));
    Matrix moved = hv_conjugation(k);
    for (const auto& [key, v] : moved.fin()) {
      REQUIRE(key.rp % 2 == 0);
      REQUIRE(key.cp % 2 == 0);
      REQUIRE(k.entry({0, key.rp / 2}, {0, key.cp / 2}) == v);
    }
  }
  TrigAngle a = TrigAngle::symbolic();
  for (int i = 0; i < 10; ++i) {
    Matrix k = lift_matrix(random_finite(rng, nat(), nat(), q, 3), a.ring);
    Matrix l = lift_matrix(random_finite(rng, nat(), nat(), q, 3), a.ring);
    REQUIRE(hv_homotopy(k * l, a) == hv_homotopy(k, a) * hv_homotopy(l, a));
  }
}

TEST_CASE("stabilizing a single-space idempotent", "[stab]") {
  Ring q = Ring::rationals();
  Rng rng(43);
  Stabilized trivial = stabilize_idempotent(ss_zero(q).b);
  REQUIRE(trivial.endpoint == ss_zero(q).b);

  IndexSet s = ss_space();
  for (int i = 0; i < 8; ++i) {
    IndexSet om = IndexSet::range(2);
    Matrix a = random_idempotent(rng, om, q);
    auto [u, ui] = random_unit(rng, om, q);
    Matrix b = ss_regularize(IdempotentPair(u * a * ui, a), [](const Pos& p) { return 3LL * p.strand; }).b;
    Stabilized st = stabilize_idempotent(b);
    REQUIRE(st.value(TrigAngle::zero(q)) == b);
    // the endpoint is the interleave: even positions carry b, odd positions carry 0 + 1
    for (int bi = 0; bi < 2; ++bi)
      for (int bj = 0; bj < 2; ++bj)
        for (long long r = 0; r < 16; ++r)
          for (long long c = 0; c < 16; ++c) {
            Scalar want;
            if (r % 2 == 0 && c % 2 == 0) want = b.entry({bi, r / 2}, {bj, c / 2});
            else want = (bi == 1 && bj == 1 && r == c) ? q.one() : q.zero();
            REQUIRE(st.endpoint.entry({bi, r}, {bj, c}) == want);
          }
    REQUIRE(is_idempotent(st.endpoint));

    Matrix symbolic = st.value(TrigAngle::symbolic());
    REQUIRE(is_idempotent(symbolic));
    for (double theta : {0.3, 0.7, 1.2}) {
      Matrix v = st.value(TrigAngle::numeric(theta));
      REQUIRE(equal(v * v, v));
      REQUIRE(equal(evaluate(symbolic, std::cos(theta), std::sin(theta)), v));
    }
  }
  Matrix bad = Matrix::identity(s, q);
  REQUIRE_THROWS_AS(stabilize_idempotent(bad), StabError);
}

TEST_CASE("room rotation", "[stab]") {
  TrigAngle a = TrigAngle::symbolic();
  const Ring& r = a.ring;
  IndexSet x = room_space();
  Matrix u = room_rotation(a), v = room_rotation(a.negated());
  REQUIRE(u * v == Matrix::identity(x, r));
  REQUIRE(v * u == Matrix::identity(x, r));
  Window w = window_product(window(u, 24, 24), window(v, 24, 24), r);
  for (size_t i = 0; i < w.rows.size(); ++i)
    for (size_t j = 0; j < w.cols.size(); ++j) REQUIRE(w.at(i, j) == (i == j ? r.one() : r.zero()));

  Ring q = Ring::rationals();
  Rng rng(44);
  IndexSet n = nat();
  Morphism id = make_room(Matrix::identity(n, q), Matrix::identity(n, q), a);
  REQUIRE(id.psi == Matrix::identity(x, r));

  auto [g, gi] = random_local_unit(rng, n, q, 3);
  Morphism m = make_room(g, gi, a);
  REQUIRE(morphism_defect(m) == "");
  Matrix rest = Matrix::identity(split_tails(IndexSet::tail_n("m"), 2).target, q);
  Morphism start = make_room(g, gi, TrigAngle::zero(q));
  REQUIRE(start.psi == direct_sum(g, rest).with_shape(x, x));
  Morphism end = make_room(g, gi, TrigAngle::quarter(q));
  IndexSet one = IndexSet::tail_n("k");
  Matrix moved = direct_sum({Matrix::identity(one, q), g, Matrix::identity(one, q)}).with_shape(x, x);
  REQUIRE(end.psi == moved);

  Morphism bad = Morphism::diagonal(Matrix::shift(n, n, q, 0, 0, 1), Matrix::shift(n, n, q, 0, 0, -1));
  REQUIRE_THROWS_AS(make_room(bad.psi, bad.psi_inv, a), StabError);
}
