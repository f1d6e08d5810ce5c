// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cstdlib>

#include "vgrass/random.hpp"
#include "vgrass/regular.hpp"

using namespace vgrass;

namespace {

IdempotentPair random_pair(Rng& rng, const IndexSet& omega, const Ring& ring) {
  Matrix a = random_local_idempotent(rng, omega, ring);
  auto [u, ui] = random_local_unit(rng, omega, ring);
  return IdempotentPair(u * a * ui, a);
}

// Rank of a finite rational matrix by Gaussian elimination on a dense copy.
long long dense_rank(const Matrix& m) {
  Window w = window(m, 1, 1);
  size_t rows = w.rows.size(), cols = w.cols.size();
  std::vector<std::vector<mpq_class>> d(rows, std::vector<mpq_class>(cols));
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) d[i][j] = std::get<mpq_class>(w.at(i, j).payload());
  long long rank = 0;
  for (size_t c = 0; c < cols && rank < static_cast<long long>(rows); ++c) {
    size_t piv = rank;
    while (piv < rows && d[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(d[piv], d[rank]);
    for (size_t r = 0; r < rows; ++r) {
      if (r == static_cast<size_t>(rank) || d[r][c] == 0) continue;
      mpq_class f = d[r][c] / d[rank][c];
      for (size_t k = c; k < cols; ++k) d[r][k] -= f * d[rank][k];
    }
    ++rank;
  }
  return rank;
}

void require_regular(const RegularIdempotent& u) {
  CoreInfo c = core_of(u);
  REQUIRE(idempotency_violations(c).empty());
  REQUIRE(regularity_violations(c).empty());
  REQUIRE(u.h * u.h == u.h);
}

}  // namespace

TEST_CASE("core components", "[regular]") {
  Ring q = Ring::rationals();
  IndexSet om = IndexSet::range(3);
  Rng rng(31);
  Matrix a = random_idempotent(rng, om, q);
  CoreInfo triv = h_components(pair_trivial(a));
  for (const Matrix* h : {&triv.h00, &triv.h01, &triv.h10, &triv.h11}) REQUIRE(h->is_zero());
  REQUIRE(assemble_core(triv).h == r0_pattern(om, q));

  CoreInfo one = h_components(pair_one(q));
  REQUIRE(one.h00 == Matrix::identity(IndexSet::range(1), q));
  REQUIRE(one.h01.is_zero());
  REQUIRE(one.h10.is_zero());
  REQUIRE(one.h11.is_zero());

  for (int i = 0; i < 50; ++i) {
    IdempotentPair p = random_pair(rng, i % 2 ? om : unite(IndexSet::range(1), IndexSet::tail_n("n")), q);
    RegularIdempotent u = regular_of(p);
    REQUIRE(u.h == regularize_pair(p).b);
    require_regular(u);
  }

  CoreInfo bad = h_components(pair_one(q));
  bad.h00 = bad.h00 + bad.h00;
  REQUIRE_THROWS_AS(assemble_core(bad), RegularError);
}

TEST_CASE("regular operations agree with regularized operations", "[regular]") {
  Ring q = Ring::rationals();
  Rng rng(32);
  std::vector<IndexSet> shapes = {IndexSet::range(1), IndexSet::range(2), IndexSet::range(3)};
  for (int i = 0; i < 100; ++i) {
    IdempotentPair p = random_pair(rng, shapes[i % 3], q), r = random_pair(rng, shapes[(i / 3) % 3], q);
    RegularIdempotent u = regular_of(p), v = regular_of(r);

    RegularIdempotent inv = regular_inv(u);
    require_regular(inv);
    REQUIRE(inv.h == regularize_pair(pair_inv(p)).b);

    RegularIdempotent pr = regular_prime(u);
    require_regular(pr);
    REQUIRE(pr.h == regularize_pair(pair_prime(p)).b);

    RegularIdempotent tl = regular_tensor_left(u, v);
    require_regular(tl);
    REQUIRE(tl.h == regularize_pair(tensor_left(p, r)).b);

    RegularIdempotent tr = regular_tensor_right(u, v);
    require_regular(tr);
    REQUIRE(tr.h == regularize_pair(tensor_right(p, r)).b);

    RegularIdempotent s = regular_sum(u, v);
    require_regular(s);
    REQUIRE(s.h == regular_of(pair_sum(p, r)).h);
  }
}

TEST_CASE("regular inverse of a trivial pair", "[regular]") {
  Ring q = Ring::rationals();
  Rng rng(33);
  Matrix a = random_idempotent(rng, IndexSet::range(2), q);
  RegularIdempotent u = regular_of(pair_trivial(a));
  REQUIRE(regular_inv(u).h == r0_pattern(IndexSet::range(2), q));
}

TEST_CASE("dimension estimate", "[regular]") {
  Ring q = Ring::rationals();
  Rng rng(34);
  REQUIRE(dim_upper(pair_zero(IndexSet::range(3), q)).dim == 0);
  REQUIRE(dim_upper(pair_zero(IndexSet::tail_n("n"), q)).dim == 0);
  REQUIRE(dim_upper(pair_one(q)).dim == 1);

  std::vector<IndexSet> shapes = {IndexSet::range(1), IndexSet::range(2),
                                  unite(IndexSet::range(1), IndexSet::tail_n("n"))};
  int submult_failures = 0;
  for (int i = 0; i < 60; ++i) {
    IdempotentPair p = random_pair(rng, shapes[i % 3], q), r = random_pair(rng, shapes[(i / 3) % 2], q);
    DimCertificate cp = dim_upper(p), cr = dim_upper(r);
    REQUIRE(verify_certificate(p, cp));
    REQUIRE(verify_certificate(r, cr));
    if (cp.dim == 0) REQUIRE(p.b == p.a);
    REQUIRE(dim_upper(pair_inv(p)).dim == cp.dim);
    REQUIRE(dim_upper(pair_sum(p, r)).dim <= cp.dim + cr.dim);

    // |chi| <= dim: chi = rank U - |kept| with U idempotent on 2 |kept| indices.
    long long rank = dense_rank(cp.trimmed.h);
    REQUIRE(chi(p) == q.from_int(rank - cp.dim));
    REQUIRE(std::llabs(rank - cp.dim) <= cp.dim);

    if (p.space.is_finite() || r.space.is_finite()) {
      DimCertificate ct = dim_upper(tensor_left(p, r));
      REQUIRE(verify_certificate(tensor_left(p, r), ct));
      if (ct.dim > cp.dim * cr.dim) ++submult_failures;
    }
  }
  INFO("submultiplicativity failures: " << submult_failures);
  CHECK(submult_failures == 0);
  REQUIRE_THROWS_AS(dim_upper(pair_zero(IndexSet::tail_z("z"), q)), RegularError);
}
