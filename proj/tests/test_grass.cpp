// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <array>
#include <set>

#include "vgrass/grass.hpp"
#include "vgrass/random.hpp"

using namespace vgrass;

namespace {

IdempotentPair random_pair(Rng& rng, const IndexSet& omega, const Ring& ring) {
  Matrix a = random_local_idempotent(rng, omega, ring);
  auto [u, ui] = random_local_unit(rng, omega, ring);
  return IdempotentPair(u * a * ui, a);
}

Morphism random_morphism(Rng& rng, const IndexSet& omega, const Ring& ring) {
  auto [psi, psi_inv] = random_local_unit(rng, omega, ring);
  auto [phi, phi_inv] = random_local_unit(rng, omega, ring);
  return Morphism::make(psi, phi, psi_inv, phi_inv);
}

void require_witness(const HomotopyWitness& w) {
  INFO(w.name);
  REQUIRE(witness_failure(w) == "");
}

Scalar dense_trace(const Matrix& k, long long n) {
  Window w = window(k, n, n);
  Scalar t = k.ring().zero();
  for (size_t i = 0; i < w.rows.size(); ++i) t += w.at(i, i);
  return t;
}

const std::vector<IndexSet>& spaces() {
  static const std::vector<IndexSet> s = {IndexSet::range(2), IndexSet::range(3),
                                          unite(IndexSet::range(1), IndexSet::tail_n("n"))};
  return s;
}

}  // namespace

TEST_CASE("pair validation", "[grass]") {
  Ring q = Ring::rationals();
  IndexSet n = IndexSet::tail_n("n");
  Matrix one = Matrix::identity(n, q), zero = Matrix::zero(n, n, q);
  REQUIRE_THROWS_AS(IdempotentPair(one, zero), GrassError);
  Matrix s = Matrix::shift(n, n, q, 0, 0, 1);
  REQUIRE_THROWS_AS(IdempotentPair(s, zero), GrassError);
  IdempotentPair p(one - Matrix::unit(n, n, q, {0, 0}, {0, 0}, q.one()), one);
  REQUIRE(chi(p) == q.from_int(-1));
  REQUIRE(chi(pair_one(q)) == q.one());
}

TEST_CASE("partial switches are involutions", "[grass]") {
  Rng rng(11);
  for (const Ring& ring : {Ring::rationals(), Ring::integers(), Ring::matrix(Ring::rationals(), 2)})
    for (const auto& omega : spaces()) {
      IndexSet space = block_space({"0", "1", "2"}, omega);
      Matrix a = random_local_idempotent(rng, omega, ring);
      for (auto [n, m] : {std::pair{0, 1}, {1, 2}, {2, 0}}) {
        Matrix s = sw(space, n, m, a);
        REQUIRE(s * s == Matrix::identity(space, ring));
      }
    }
}

TEST_CASE("regularization blocks", "[grass]") {
  Rng rng(12);
  for (int i = 0; i < 60; ++i) {
    const auto& omega = spaces()[i % spaces().size()];
    Ring ring = i % 2 ? Ring::rationals() : Ring::matrix(Ring::rationals(), 2);
    IdempotentPair p = random_pair(rng, omega, ring);
    Matrix ab = complement(p.a), d = p.b - p.a;
    Matrix r = regularized_matrix(p.b, p.a);
    int k = omega.strand_count();
    REQUIRE(extract(r, 0, 0, omega, omega) == ab * d * ab);
    REQUIRE(extract(r, 0, k, omega, omega) == ab * d * p.a);
    REQUIRE(extract(r, k, 0, omega, omega) == p.a * d * ab);
    REQUIRE(extract(r, k, k, omega, omega) == Matrix::identity(omega, ring) + p.a * d * p.a);
    IdempotentPair rp = regularize_pair(p);
    REQUIRE(is_valid_pair(rp));
    // traces of products only cycle over commutative coefficients
    if (ring.commutative()) REQUIRE(chi(rp) == chi(p));
    require_witness(regularization_witness(p));
  }
}

TEST_CASE("translation and taming conjugations", "[grass]") {
  Rng rng(13);
  for (int i = 0; i < 120; ++i) {
    const auto& omega = spaces()[i % spaces().size()];
    Ring ring = i % 3 == 0 ? Ring::integers() : (i % 3 == 1 ? Ring::rationals() : Ring::matrix(Ring::rationals(), 2));
    IdempotentPair p = random_pair(rng, omega, ring);
    require_witness(translation_witness(p));
    require_witness(regularized_translation_witness(p));

    Morphism m = random_morphism(rng, omega, ring);
    REQUIRE(morphism_defect(m) == "");
    require_witness(r_morphism_witness(p, m));
    require_witness(regularized_taming_witness(p, m));
    require_witness(inv_conjugation_witness(p, m));

    Morphism fixing{m.psi, Matrix::identity(omega, ring), m.psi_inv, Matrix::identity(omega, ring)};
    Tamed t = tame_T(fixing, p);
    REQUIRE(t.commutes);
    REQUIRE(morphism_defect(t.conj) == "");
    require_witness(stable_taming_witness(p, fixing));
  }
}

TEST_CASE("taming with a base-preserving unit", "[grass]") {
  Rng rng(14);
  Ring q = Ring::rationals();
  IndexSet omega = IndexSet::range(3);
  for (int i = 0; i < 40; ++i) {
    CommutingUnit cu = random_commuting(rng, omega, q);
    auto [u, ui] = random_unit(rng, omega, q);
    IdempotentPair p(u * cu.a * ui, cu.a);
    auto [psi, psi_inv] = random_unit(rng, omega, q);
    Morphism m = Morphism::make(psi, cu.phi, psi_inv, cu.phi_inv);
    REQUIRE(m.apply(p).a == p.a);
    require_witness(stable_taming_witness(p, m));
    require_witness(regularized_taming_witness(p, m));
  }
}

TEST_CASE("cancellation unit", "[grass]") {
  Rng rng(15);
  for (const Ring& ring : {Ring::rationals(), Ring::matrix(Ring::rationals(), 2)})
    for (int k : {1, 2, 3}) {
      IndexSet omega = IndexSet::range(k);
      Matrix a = random_idempotent(rng, omega, ring);
      CancelB cb = cancel_B(a);
      IndexSet z = cb.bz.rows();
      REQUIRE(cb.bz * cb.bz_inv == Matrix::identity(z, ring));
      REQUIRE(cb.bz_inv * cb.bz == Matrix::identity(cb.bz.cols(), ring));
      REQUIRE(morphism_defect(cb.split) == "");
      REQUIRE(cb.split.psi * cb.step_source * cb.split.psi_inv == cb.step_target);

      // The split form is the half-integer form read through -1/2-k <-> j = -1-k, 1/2+k <-> j = k
      // on rows and -1-k, 0, 1+k on columns.
      auto row_pos = [&](long long j, int w) { return j < 0 ? Pos{w, -1 - j} : Pos{k + w, j}; };
      auto col_pos = [&](long long j, int w) {
        return j < 0 ? Pos{w, -1 - j} : (j == 0 ? Pos{k + w, 0} : Pos{2 * k + w, j - 1});
      };
      for (long long i = -5; i < 5; ++i)
        for (long long j = -5; j < 5; ++j)
          for (int v = 0; v < k; ++v)
            for (int w = 0; w < k; ++w) {
              REQUIRE(cb.split.psi.entry(row_pos(i, v), col_pos(j, w)) == cb.bz.entry({v, i}, {w, j}));
              REQUIRE(cb.split.psi_inv.entry(col_pos(j, w), row_pos(i, v)) == cb.bz_inv.entry({w, j}, {v, i}));
            }
      require_witness(cancellation_witness(a));
    }
}

TEST_CASE("commutativity conjugator", "[grass]") {
  Rng rng(16);
  Ring q = Ring::rationals();
  for (int i = 0; i < 40; ++i) {
    IdempotentPair p = random_pair(rng, IndexSet::range(1 + i % 2), q);
    const auto& xi = spaces()[i % spaces().size()];
    IdempotentPair r = random_pair(rng, xi, q);
    require_witness(comm_witness(p, r));
    REQUIRE(chi(tensor_left(p, r)) == chi(p) * chi(r));
    REQUIRE(chi(tensor_right(p, r)) == chi(p) * chi(r));
  }
  IdempotentPair m2 = pair_one(Ring::matrix(q, 2));
  REQUIRE_THROWS_AS(comm_C(m2, m2), GrassError);
}

TEST_CASE("inverse and prime witnesses", "[grass]") {
  Rng rng(17);
  for (int i = 0; i < 60; ++i) {
    Ring ring = i % 2 ? Ring::rationals() : Ring::matrix(Ring::rationals(), 2);
    const auto& omega = spaces()[i % spaces().size()];
    IdempotentPair p = random_pair(rng, omega, ring);
    require_witness(additive_inverse_witness(p));
    require_witness(inv_prime_witness(p));
    REQUIRE(chi(pair_inv(p)) == -chi(p));
    REQUIRE(chi(pair_prime(p)) == chi(p));
    REQUIRE(inv_stabilization_display(p, IndexSet::range(2), IndexSet::tail_n("x")));
    if (ring.commutative()) REQUIRE(tensor_stabilization_display(p, IndexSet::range(2), IndexSet::range(1)));
    if (omega.is_finite()) require_witness(prime_witness(p));
  }
}

TEST_CASE("difference decomposition chain", "[grass]") {
  Rng rng(18);
  for (int i = 0; i < 40; ++i) {
    Ring ring = i % 2 ? Ring::rationals() : Ring::matrix(Ring::rationals(), 2);
    IndexSet omega = IndexSet::range(2 + i % 2);
    Matrix a = random_idempotent(rng, omega, ring);
    auto [u, ui] = random_unit(rng, omega, ring);
    auto [v, vi] = random_unit(rng, omega, ring);
    Matrix b = u * a * ui, bp = v * a * vi;
    auto chain = diff_decomposition(b, bp, a);
    REQUIRE(chain.size() == 4);
    for (size_t s = 0; s < chain.size(); ++s) {
      require_witness(chain[s]);
      if (s > 0) REQUIRE(chain[s].lhs == chain[s - 1].rhs);
    }
    REQUIRE(chain.back().rhs == pair_sum(IdempotentPair(b, a), pair_inv(IdempotentPair(bp, a))));
  }
}

TEST_CASE("tensor compatibilities", "[grass]") {
  Rng rng(19);
  Ring q = Ring::rationals();
  for (int i = 0; i < 30; ++i) {
    IdempotentPair p = random_pair(rng, IndexSet::range(2), q);
    const auto& xi = spaces()[i % spaces().size()];
    IdempotentPair r = random_pair(rng, xi, q);
    Morphism m = random_morphism(rng, xi, q);
    require_witness(tensor_conjugation_witness(p, r, m));
    // chi is multiplicative against a dense trace
    if (xi.is_finite()) REQUIRE(dense_trace(tensor_left(p, r).b - tensor_left(p, r).a, 1) == chi(p) * chi(r));
  }
}

TEST_CASE("regularized product core formula", "[grass]") {
  Rng rng(20);
  Ring q = Ring::rationals();
  for (int i = 0; i < 40; ++i) {
    IdempotentPair p = random_pair(rng, IndexSet::range(2), q), r = random_pair(rng, IndexSet::range(1 + i % 3), q);
    IdempotentPair t = tensor_left(p, r);
    Matrix reg = regularized_matrix(t.b, t.a);
    IdempotentPair rp = pair_prime(r);
    auto core = [](const IdempotentPair& x) {
      Matrix ab = complement(x.a), d = x.b - x.a;
      return std::array<Matrix, 4>{ab * d * ab, ab * d * x.a, x.a * d * ab, x.a * d * x.a};
    };
    auto h = core(p), k = core(r), kp = core(rp);
    IndexSet om = t.space;
    int n = om.strand_count();
    REQUIRE(extract(reg, 0, 0, om, om) == kronecker(h[3], kp[3]) + kronecker(h[0], k[0]));
    REQUIRE(extract(reg, 0, n, om, om) == kronecker(h[3], kp[2]) + kronecker(h[2], kp[2] + kp[3]) +
                                              kronecker(h[1], k[0] + k[1]) + kronecker(h[0], k[1]));
    REQUIRE(extract(reg, n, 0, om, om) == kronecker(h[3], kp[1]) + kronecker(h[2], k[2] + k[0]) +
                                              kronecker(h[1], kp[1] + kp[3]) + kronecker(h[0], k[2]));
    REQUIRE(extract(reg, n, n, om, om) ==
            Matrix::identity(om, q) + kronecker(h[3], kp[0]) + kronecker(h[0], k[3]));
  }
}

TEST_CASE("single-space operations", "[grass]") {
  Rng rng(21);
  Ring q = Ring::rationals();
  IdempotentPair one = ss_one(q), zero = ss_zero(q);
  REQUIRE(is_single_space(one));
  REQUIRE(is_single_space(zero));
  REQUIRE(chi(one) == q.one());
  REQUIRE(ss_add(zero, zero) == zero);
  REQUIRE(chi(ss_mul(one, one)) == q.one());

  IndexSet n = IndexSet::tail_n("n");
  std::vector<IdempotentPair> xs = {one, zero, ss_neg(one)};
  for (int i = 0; i < 6; ++i) xs.push_back(ss_regularize(random_pair(rng, IndexSet::range(2), q),
                                                         [](const Pos& p) { return static_cast<long long>(p.strand); }));
  for (const auto& x : xs) {
    REQUIRE(is_single_space(x));
    REQUIRE(chi(ss_neg(x)) == -chi(x));
    for (const auto& y : xs) {
      IdempotentPair s = ss_add(x, y), m = ss_mul(x, y);
      REQUIRE(is_single_space(s));
      REQUIRE(is_single_space(m));
      REQUIRE(chi(s) == chi(x) + chi(y));
      REQUIRE(chi(m) == chi(x) * chi(y));

      // the sum against the regularized direct sum read through theta1
      IdempotentPair d = pair_sum(x, y);
      Matrix reg = regularized_matrix(d.b, d.a);
      int k = d.space.strand_count();
      for (int bi = 0; bi < 2; ++bi)
        for (int bj = 0; bj < 2; ++bj)
          for (int rs = 0; rs < k; ++rs)
            for (int cs = 0; cs < k; ++cs)
              for (long long rp = 0; rp < 4; ++rp)
                for (long long cp = 0; cp < 4; ++cp) {
                  Scalar want = reg.entry({bi * k + rs, rp}, {bj * k + cs, cp});
                  if (bi == 1 && bj == 1 && rs == cs && rp == cp) want -= q.one();
                  Pos r{bi, theta1(rs / 2, rs % 2, rp)}, c{bj, theta1(cs / 2, cs % 2, cp)};
                  Scalar got = s.b.entry(r, c) - s.a.entry(r, c);
                  REQUIRE(got == want);
                }
    }
  }
  REQUIRE_THROWS_AS(ss_add(pair_one(q), one), GrassError);
  (void)n;
}

TEST_CASE("theta relabelings are injective", "[grass]") {
  std::set<long long> seen1, seen3;
  for (int c = 0; c < 2; ++c)
    for (int b = 0; b < 2; ++b)
      for (long long n = 0; n < 50; ++n) REQUIRE(seen1.insert(theta1(c, b, n)).second);
  for (long long v = 0; v < 200; ++v) REQUIRE(seen1.count(v));
  for (int b1 = 0; b1 < 2; ++b1)
    for (int b2 = 0; b2 < 2; ++b2)
      for (long long n1 = 0; n1 < 16; ++n1)
        for (long long n2 = 0; n2 < 16; ++n2) REQUIRE(seen3.insert(theta3(b1, n1, b2, n2)).second);
  for (long long v = 0; v < 1024; ++v) REQUIRE(seen3.count(v));
}
