// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>

#include "vgrass/analytic.hpp"
#include "vgrass/random.hpp"

using namespace vgrass;

namespace {

Matrix one_like(const Matrix& a) { return Matrix::identity(a.rows(), a.ring()); }

Matrix rotation(double angle) {
  IndexSet two = IndexSet::range(2);
  Ring f = Ring::floats();
  double c = std::cos(angle), s = std::sin(angle);
  Matrix m(two, two, f);
  m.add_entry({0, 0}, {0, 0}, f.from_double(c));
  m.add_entry({0, 0}, {1, 0}, f.from_double(-s));
  m.add_entry({1, 0}, {0, 0}, f.from_double(s));
  m.add_entry({1, 0}, {1, 0}, f.from_double(c));
  return m;
}

// Near-idempotent instance: a float idempotent plus finite noise scaled into the defect budget.
NearIdempotent near_instance(Rng& rng, const IndexSet& omega, double target) {
  IndexSet two = unite(omega, omega);
  Matrix d = to_float(r0_pattern(omega, Ring::rationals())).with_shape(two, two);
  Matrix g = Matrix::identity(two, Ring::floats()) +
             Ring::floats().from_double(0.1) * to_float(random_finite(rng, two, two, Ring::rationals(), 2, 0.5));
  Matrix p = g * d * window_inverse(g);
  Matrix noise = to_float(random_finite(rng, p.rows(), p.cols(), Ring::rationals(), 2, 0.5));
  double scale = target / std::max(1.0, window_norm(noise)) / std::max(1.0, window_norm(p) * window_norm(p));
  NearIdempotent x = NearIdempotent::make(p + p.ring().from_double(scale) * noise, p);
  while (x.defect > target) {
    scale /= 2;
    x = NearIdempotent::make(p + p.ring().from_double(scale) * noise, p);
  }
  return x;
}

// sign(X) by the Newton iteration X <- (X + X^-1) / 2.
Matrix newton_sign(Matrix x) {
  Scalar half = x.ring().from_double(0.5);
  for (int i = 0; i < 100; ++i) {
    Matrix next = half * (x + window_inverse(x));
    double step = window_norm(next - x);
    x = next;
    if (step < 1e-14) break;
  }
  return x;
}

// P = (1 + K)(1 + L) R0 (1 - L)(1 - K) with geometrically decaying K, L between the two blocks.
Matrix decaying_idempotent(double scale, long long len) {
  IndexSet omega = IndexSet::tail_n("n");
  Ring f = Ring::floats();
  Matrix r0 = r0_pattern(omega, f);
  Matrix k(r0.rows(), r0.cols(), f), l(r0.rows(), r0.cols(), f);
  for (long long i = 0; i < len; ++i)
    for (long long j = 0; j < len; ++j) {
      k.add_entry({0, i}, {1, j}, f.from_double(scale * std::pow(0.3, i + j)));
      l.add_entry({1, i}, {0, j}, f.from_double(0.5 * scale * std::pow(0.3, i + j + 1)));
    }
  Matrix one = one_like(r0);
  return (one + k) * (one + l) * r0 * (one - l) * (one - k);
}

}  // namespace

TEST_CASE("transport along the rotation family", "[analytic]") {
  const double omega = 20;
  IdempotentPath path = rotation_path(omega, 1e-3);
  Matrix p0 = path.sample(0), p1 = path.sample(1);
  Matrix x = transport(path, 0, 1);
  double residual = conjugation_residual(x, p0, p1);
  CHECK(residual <= 1e-6);
  // the exact solution rotates by omega (t2 - t1)
  CHECK(window_norm(x - rotation(omega)) <= 1e-6);

  IdempotentPath fine = rotation_path(omega, 5e-4);
  double finer = conjugation_residual(transport(fine, 0, 1), p0, p1);
  INFO("residual " << residual << " halved " << finer);
  CHECK(residual / finer >= 8);

  // cocycle and reversal
  Matrix a = transport(path, 0, 0.4), b = transport(path, 0.4, 1);
  CHECK(window_norm(b * a - x) <= 1e-6);
  Matrix back = transport(path, 1, 0);
  CHECK(window_norm(back * x - one_like(x)) <= 1e-6);

  // finite differences when no derivative is given
  IdempotentPath numeric = path;
  numeric.derivative = nullptr;
  numeric.step = 1e-3;
  CHECK(conjugation_residual(transport(numeric, 0, 0.3), p0, path.sample(0.3)) <= 1e-6);
}

TEST_CASE("series expansion matches its low orders", "[analytic]") {
  Rng rng(51);
  NearIdempotent x = near_instance(rng, IndexSet::range(3), 0.02);
  Matrix p = x.reference, eps = x.reference - x.p_tilde;
  Scalar two = p.ring().from_int(2), three = p.ring().from_int(3), six = p.ring().from_int(6);
  Matrix first = p + two * (p * eps * p) - eps * p - p * eps;
  Matrix second = first + p * eps * eps + eps * p * eps + eps * eps * p - three * (p * eps * p * eps) -
                  three * (p * eps * eps * p) - three * (eps * p * eps * p) + six * (p * eps * p * eps * p);
  CHECK(window_norm(idem(x, IdemMethod::Series, 0) - p) <= 1e-12);
  CHECK(window_norm(idem(x, IdemMethod::Series, 1) - first) <= 1e-12);
  CHECK(window_norm(idem(x, IdemMethod::Series, 2) - second) <= 1e-12);
  REQUIRE_THROWS_AS(idem(x, IdemMethod::Series, 9), AnalyticError);
}

TEST_CASE("idempotent correction", "[analytic]") {
  Rng rng(52);
  std::vector<IndexSet> shapes = {IndexSet::range(2), IndexSet::range(4),
                                  unite(IndexSet::range(1), IndexSet::tail_n("n"))};
  double worst_idem = 0, worst_agree = 0;
  for (int i = 0; i < 50; ++i) {
    NearIdempotent x = near_instance(rng, shapes[i % 3], 0.05);
    REQUIRE(x.defect <= 0.05);
    Matrix qn = idem(x, IdemMethod::Newton), qs = idem(x, IdemMethod::Series, 8);
    worst_idem = std::max({worst_idem, window_norm(qn * qn - qn), window_norm(qs * qs - qs)});
    worst_agree = std::max(worst_agree, window_norm(qn - qs));
    CHECK(window_norm(qn - x.p_tilde) <= 4 * x.defect);
    NearIdempotent again = NearIdempotent::make(qn, x.reference);
    CHECK(window_norm(idem(again, IdemMethod::Newton) - qn) <= 1e-10);
  }
  INFO("worst idempotency " << worst_idem << ", worst agreement " << worst_agree);
  CHECK(worst_idem <= 1e-10);
  CHECK(worst_agree <= 1e-8);

  Matrix p = to_float(random_idempotent(rng, IndexSet::range(2), Ring::rationals()));
  Matrix far = p + p.ring().from_double(0.4) * one_like(p);
  REQUIRE_THROWS_AS(idem(NearIdempotent::make(far, p), IdemMethod::Newton), AnalyticError);
}

TEST_CASE("connectors", "[analytic]") {
  Rng rng(53);
  Ring q = Ring::rationals();
  for (int i = 0; i < 30; ++i) {
    IndexSet om = i % 2 ? IndexSet::range(3) : unite(IndexSet::range(1), IndexSet::tail_n("n"));
    Matrix p = random_local_idempotent(rng, om, q), qq = random_local_idempotent(rng, om, q);
    Matrix plain = connector_plain(p, qq), corrected = connector_corrected(p, qq);
    Matrix reflect = one_like(qq) - q.from_int(2) * qq;
    REQUIRE(reflect * corrected == plain);
    REQUIRE(plain * p == qq * plain);
    REQUIRE(corrected * p == qq * corrected);
  }

  int checked = 0;
  for (int i = 0; i < 30; ++i) {
    NearIdempotent x = near_instance(rng, i % 2 ? IndexSet::range(3) : unite(IndexSet::range(1), IndexSet::tail_n("n")), 0.05);
    Matrix p = x.reference, qq = idem(x, IdemMethod::Newton);
    Morphism s = connect(p, qq, ConnectForm::Sign);
    Matrix one = one_like(p);
    CHECK(window_norm(s.psi * s.psi - one) <= 1e-9);
    CHECK(window_norm(s.psi * p - qq * s.psi) <= 1e-9);
    Matrix two_p = one - p.ring().from_int(2) * p, two_q = one - p.ring().from_int(2) * qq;
    CHECK(window_norm(two_q * s.psi - s.psi * two_p) <= 1e-9);
    CHECK(window_norm(s.psi - newton_sign(connector_plain(p, qq))) <= 1e-9);

    for (ConnectForm form : {ConnectForm::Plain, ConnectForm::Corrected}) {
      Morphism c = connect(p, qq, form);
      CHECK(window_norm(c.psi * c.psi_inv - one) <= 1e-9);
      CHECK(conjugation_residual(c.psi, p, qq) <= 1e-9);
    }
    ++checked;
  }
  REQUIRE(checked == 30);
}

TEST_CASE("finite reduction", "[analytic]") {
  Matrix p = decaying_idempotent(0.02, 40);
  Matrix r0 = r0_pattern(IndexSet::tail_n("n"), Ring::floats());
  REQUIRE(window_norm(p * p - p) <= 1e-12);
  Reduction red = finite_reduce(p, r0, 1e-3);
  INFO("dropped " << red.dropped << " radius " << red.support_radius << " bound " << red.bound);
  CHECK(red.dropped > 0);
  CHECK(red.bound < 0.5);
  CHECK(red.residual <= 1e-8);
  CHECK(red.support_radius < 40);
  CHECK(window_norm(red.p_eps * red.p_eps - red.p_eps) <= 1e-10);
  // the connector intertwines and inverts without going through the residual helper
  Matrix one = one_like(p);
  CHECK(window_norm(red.conj.psi * p - red.p_eps * red.conj.psi) <= 1e-8);
  CHECK(window_norm(red.conj.psi * red.conj.psi_inv - one) <= 1e-8);
  CHECK(window_norm(red.conj.psi - one) < 1);

  Matrix big = decaying_idempotent(0.4, 40);
  // an exact idempotent with the larger perturbation still reduces at a fine cutoff
  Reduction fine = finite_reduce(big, r0, 1e-3);
  CHECK(fine.bound < 0.5);
  CHECK(fine.residual <= 1e-8);
  REQUIRE_THROWS_AS(finite_reduce(big, r0, 0.5), AnalyticError);
  REQUIRE_THROWS_AS(finite_reduce(r0 + r0, r0, 1e-3), AnalyticError);
}

TEST_CASE("analytic small cases", "[analytic]") {
  Ring f = Ring::floats();
  IndexSet two = IndexSet::range(2);
  Matrix e00 = Matrix::unit(two, two, f, {0, 0}, {0, 0}, f.one());
  Matrix e01 = Matrix::unit(two, two, f, {0, 0}, {1, 0}, f.one());
  for (IdemMethod m : {IdemMethod::Newton, IdemMethod::Series})
    CHECK(window_norm(idem(NearIdempotent::make(e00, e00), m) - e00) <= 1e-14);

  // diag(1,0) + 0.01 e01 is already idempotent: the spectral projection is itself
  Matrix pt = e00 + f.from_double(0.01) * e01;
  for (IdemMethod m : {IdemMethod::Newton, IdemMethod::Series}) {
    Matrix q = idem(NearIdempotent::make(pt, e00), m);
    CHECK(window_norm(q * q - q) <= 1e-10);
    CHECK(window_norm(q - pt) <= 1e-10);
  }
  REQUIRE_THROWS_AS(idem(NearIdempotent::make(f.from_double(0.5) * e00, e00), IdemMethod::Newton), AnalyticError);

  Morphism same = connect(e00, e00, ConnectForm::Plain);
  Matrix one = one_like(e00);
  CHECK(window_norm(same.psi - (one - f.from_int(2) * e00)) <= 1e-15);
  CHECK(window_norm(same.psi * same.psi - one) <= 1e-15);

  Matrix r = rotation(0.1), rt = rotation(-0.1);
  Matrix q = r * e00 * rt;
  for (ConnectForm form : {ConnectForm::Plain, ConnectForm::Corrected, ConnectForm::Sign}) {
    Morphism c = connect(e00, q, form);
    CHECK(conjugation_residual(c.psi, e00, q) <= 1e-10);
    CHECK(window_norm(c.psi * e00 * c.psi_inv - q) <= 1e-10);
  }
  Matrix s = connect(e00, q, ConnectForm::Sign).psi;
  CHECK(window_norm(s * s - one) <= 1e-9);

  Matrix r0 = r0_pattern(IndexSet::tail_n("n"), f);
  Matrix fin = decaying_idempotent(0.02, 3);
  Reduction same_red = finite_reduce(fin, r0, 1e-9);
  CHECK(same_red.dropped == 0);
  CHECK(window_norm(same_red.p_eps - fin) <= 1e-12);
  CHECK(window_norm(same_red.conj.psi - one_like(fin)) <= 1e-12);
}
