// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include "vgrass/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "vgrass/analytic.hpp"
#include "vgrass/fred.hpp"
#include "vgrass/random.hpp"
#include "vgrass/regular.hpp"
#include "vgrass/stab.hpp"

namespace vgrass {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

class Ctx {
 public:
  Ctx(FamilyReport& rep, std::uint64_t seed) : rep_(rep), seed_(seed) {}

  void check(bool ok, const std::string& construction, const std::string& detail = "") {
    ++rep_.checks;
    if (!ok) rep_.failures.push_back({seed_, construction, detail.empty() ? "identity fails" : detail});
  }
  void same(const Matrix& a, const Matrix& b, const std::string& construction) {
    bool ok = a == b;
    check(ok, construction, ok ? "" : first_difference(a, b));
  }
  void witness(const HomotopyWitness& w, const std::string& construction) {
    std::string f = witness_failure(w);
    check(f.empty(), construction, f);
  }
  // value <= tol, tracking the worst value seen under the metric name.
  void bound(double value, double tol, const std::string& metric) {
    double& worst = rep_.metrics.try_emplace(metric, 0.0).first->second;
    worst = std::max(worst, value);
    check(value <= tol, metric, metric + " = " + std::to_string(value) + " exceeds " + std::to_string(tol));
  }
  void metric(const std::string& name, double v) { rep_.metrics[name] = v; }
  void fail(const std::string& construction, const std::string& what) {
    ++rep_.checks;
    rep_.failures.push_back({seed_, construction, what});
  }

 private:
  FamilyReport& rep_;
  std::uint64_t seed_;
};

const Ring& Q() {
  static const Ring q = Ring::rationals();
  return q;
}

IndexSet nat() { return IndexSet::tail_n("n"); }

IdempotentPair finite_pair(Rng& rng, const IndexSet& omega) {
  Matrix a = random_idempotent(rng, omega, Q());
  auto [u, ui] = random_unit(rng, omega, Q());
  return IdempotentPair(u * a * ui, a);
}

IdempotentPair local_pair(Rng& rng, const IndexSet& omega) {
  Matrix a = random_local_idempotent(rng, omega, Q());
  auto [u, ui] = random_local_unit(rng, omega, Q());
  return IdempotentPair(u * a * ui, a);
}

Morphism finite_morphism(Rng& rng, const IndexSet& omega) {
  auto [psi, psi_inv] = random_unit(rng, omega, Q());
  auto [phi, phi_inv] = random_unit(rng, omega, Q());
  return Morphism::make(psi, phi, psi_inv, phi_inv);
}

IndexSet small_space(Rng& rng, int max) { return IndexSet::range(1 + static_cast<int>(rng() % max)); }

IndexSet mixed_space(int i) {
  if (i % 3 == 2) return unite(IndexSet::range(1), nat());
  return IndexSet::range(1 + i % 3);
}

bool chi_conserved(const HomotopyWitness& w) {
  return chi(padded(w.lhs, w.pads_lhs)) == chi(padded(w.rhs, w.pads_rhs));
}

// Regularization, translation and taming conjugations on finite spaces of size <= 4.
void fam_conjugation(Ctx& c, Rng& rng, int) {
  IndexSet omega = small_space(rng, 4);
  IdempotentPair p = finite_pair(rng, omega);
  Morphism m = finite_morphism(rng, omega);
  c.witness(r_morphism_witness(p, m), "R-morphism");
  c.witness(translation_witness(p), "translation H");
  c.witness(regularized_translation_witness(p), "regularized translation HR");
  Matrix one = Matrix::identity(omega, Q());
  Morphism fixing{m.psi, one, m.psi_inv, one};
  c.witness(stable_taming_witness(p, fixing), "stable taming T'");
  CommutingUnit cu = random_commuting(rng, omega, Q());
  auto [u, ui] = random_unit(rng, omega, Q());
  IdempotentPair pc(u * cu.a * ui, cu.a);
  Morphism mc = Morphism::make(m.psi, cu.phi, m.psi_inv, cu.phi_inv);
  c.witness(stable_taming_witness(pc, mc), "stable taming T' (base-commuting unit)");
  c.witness(regularized_taming_witness(p, m), "regularized taming TR");
}

void fam_cancellation(Ctx& c, Rng& rng, int) {
  IndexSet omega = small_space(rng, 3);
  Matrix a = random_idempotent(rng, omega, Q());
  CancelB cb = cancel_B(a);
  c.same(cb.bz * cb.bz_inv, Matrix::identity(cb.bz.rows(), Q()), "B(a) B(a)^-1");
  c.same(cb.bz_inv * cb.bz, Matrix::identity(cb.bz.cols(), Q()), "B(a)^-1 B(a)");
  c.check(morphism_defect(cb.split).empty(), "split cancellation unit", morphism_defect(cb.split));
  c.same(cb.split.psi * cb.step_source * cb.split.psi_inv, cb.step_target, "step-function conjugation");
  c.witness(cancellation_witness(a), "cancellation witness");
}

void fam_hring(Ctx& c, Rng& rng, int i) {
  IndexSet omega = mixed_space(i);
  IdempotentPair p = local_pair(rng, omega);
  c.witness(additive_inverse_witness(p), "additive inverse");
  c.witness(inv_prime_witness(p), "inv' variant");
  if (omega.is_finite()) c.witness(prime_witness(p), "prime via cancellation");

  IdempotentPair q = local_pair(rng, IndexSet::range(1 + i % 2));
  c.witness(comm_witness(q, p), "commutativity conjugator C");

  c.check(inv_stabilization_display(p, IndexSet::range(2), nat()), "inverse of a stabilized pair");
  c.check(tensor_stabilization_display(p, IndexSet::range(2), IndexSet::range(1)), "tensor with a stabilizer");
  auto [psi, psi_inv] = random_local_unit(rng, omega, Q());
  auto [phi, phi_inv] = random_local_unit(rng, omega, Q());
  Morphism m = Morphism::make(psi, phi, psi_inv, phi_inv);
  c.witness(inv_conjugation_witness(p, m), "inverse of a conjugation");
  c.witness(tensor_conjugation_witness(q, p, m), "tensor of a conjugation");

  IndexSet fin = IndexSet::range(2 + i % 2);
  Matrix a = random_idempotent(rng, fin, Q());
  auto [u, ui] = random_unit(rng, fin, Q());
  auto [v, vi] = random_unit(rng, fin, Q());
  Matrix b = u * a * ui, bp = v * a * vi;
  std::vector<HomotopyWitness> chain = diff_decomposition(b, bp, a);
  for (size_t s = 0; s < chain.size(); ++s) {
    c.witness(chain[s], "difference chain step " + std::to_string(s));
    if (s > 0) c.check(chain[s].lhs == chain[s - 1].rhs, "difference chain links");
  }
  c.check(chain.back().rhs == pair_sum(IdempotentPair(b, a), pair_inv(IdempotentPair(bp, a))), "difference chain end");

  if (i == 0) {
    IdempotentPair m2 = pair_one(Ring::matrix(Q(), 2));
    bool threw = false;
    try {
      comm_C(m2, m2);
    } catch (const GrassError&) {
      threw = true;
    }
    c.check(threw, "C rejects noncommutative coefficients");
  }
}

void fam_chi(Ctx& c, Rng& rng, int i) {
  IdempotentPair p = local_pair(rng, mixed_space(i));
  IdempotentPair r = local_pair(rng, mixed_space(i / 3));
  Scalar cp = chi(p), cr = chi(r);
  c.check(chi(pair_sum(p, r)) == cp + cr, "chi additive over sums");
  c.check(chi(pair_inv(p)) == -cp, "chi negated by inv");
  if (p.space.is_finite() || r.space.is_finite()) {
    c.check(chi(tensor_left(p, r)) == cp * cr, "chi multiplicative over left tensor");
    c.check(chi(tensor_right(p, r)) == cp * cr, "chi multiplicative over right tensor");
  }
  for (const HomotopyWitness& w : {regularization_witness(p), additive_inverse_witness(p), translation_witness(p)}) {
    c.check(verify_witness(w), w.name);
    c.check(chi_conserved(w), "chi conserved by " + w.name);
  }
  if (i == 0) {
    c.check(chi(pair_one(Q())) == Q().one(), "chi(1) = 1");
    c.check(chi(pair_zero(nat(), Q())) == Q().zero(), "chi(0) = 0");
    c.check(chi(pair_zero_prime(IndexSet::range(3), Q())) == Q().zero(), "chi(0') = 0");
  }
}

void regular_ok(Ctx& c, const RegularIdempotent& u, const std::string& what) {
  CoreInfo k = core_of(u);
  std::vector<std::string> bad = idempotency_violations(k), irr = regularity_violations(k);
  bad.insert(bad.end(), irr.begin(), irr.end());
  c.check(bad.empty(), what + ": twelve identities", bad.empty() ? "" : bad.front());
  c.same(u.h * u.h, u.h, what + ": idempotent");
}

void fam_regular(Ctx& c, Rng& rng, int i) {
  IdempotentPair p = local_pair(rng, mixed_space(i)), r = local_pair(rng, IndexSet::range(1 + (i / 3) % 3));
  RegularIdempotent u = regular_of(p), v = regular_of(r);
  regular_ok(c, u, "R p");
  c.same(u.h, regularize_pair(p).b, "regular_of agrees with R");
  RegularIdempotent inv = regular_inv(u), pr = regular_prime(u), tl = regular_tensor_left(u, v);
  regular_ok(c, inv, "regular inv");
  regular_ok(c, pr, "regular prime");
  regular_ok(c, tl, "regular left tensor");
  c.same(inv.h, regularize_pair(pair_inv(p)).b, "regular inv = R inv");
  c.same(pr.h, regularize_pair(pair_prime(p)).b, "regular prime = R prime");
  c.same(tl.h, regularize_pair(tensor_left(p, r)).b, "regular left tensor = R left tensor");
  RegularIdempotent sum = regular_sum(u, v);
  regular_ok(c, sum, "regular sum");
}

void fam_dim(Ctx& c, Rng& rng, int i) {
  IdempotentPair p = local_pair(rng, mixed_space(i)), r = local_pair(rng, IndexSet::range(1 + (i / 3) % 2));
  DimCertificate cp = dim_upper(p), cr = dim_upper(r);
  c.check(verify_certificate(p, cp), "dimension certificate verifies");
  if (cp.dim == 0) c.check(p.b == p.a, "dim 0 implies b = a");
  c.check(dim_upper(pair_inv(p)).dim == cp.dim, "dim inv-symmetric");
  c.check(dim_upper(pair_sum(p, r)).dim <= cp.dim + cr.dim, "dim subadditive");
  IdempotentPair t = tensor_left(p, r);
  DimCertificate ct = dim_upper(t);
  c.check(verify_certificate(t, ct), "tensor certificate verifies");
  c.check(ct.dim <= cp.dim * cr.dim, "dim submultiplicative",
          std::to_string(ct.dim) + " > " + std::to_string(cp.dim) + " * " + std::to_string(cr.dim));
  if (i == 0) {
    c.check(dim_upper(pair_one(Q())).dim == 1, "dim 1 = 1");
    c.check(dim_upper(pair_zero(nat(), Q())).dim == 0, "dim 0 = 0");
  }
}

void fam_qu1(Ctx& c, Rng&, int) {
  Qu1Demo d = demo_qu1();
  c.check(d.pass, "V Qu1 C(theta) e3", d.text);
}

Matrix unit_e(const Ring& ring, long long r, long long col) {
  return Matrix::unit(nat(), nat(), ring, {0, r}, {0, col}, ring.one());
}

void fam_stab(Ctx& c, Rng& rng, int i) {
  TrigAngle a = TrigAngle::symbolic();
  ColumnFiniteOperator cs = cstab(a);
  if (i == 0) {
    bool ok = true;
    std::string where;
    for (long long x = 0; x < 40 && ok; ++x)
      for (long long y = 0; y < 40 && ok; ++y)
        if (cs.gram({0, x}, {0, y}) != (x == y ? a.ring.one() : a.ring.zero())) {
          ok = false;
          where = "(C^T C)(" + std::to_string(x) + "," + std::to_string(y) + ")";
        }
    c.check(ok, "C^T C = 1 on a 40 window", where);

    IndexSet x = room_space();
    c.same(room_rotation(a) * room_rotation(a.negated()), Matrix::identity(x, a.ring), "M(alpha) M(-alpha)");
    c.same(room_rotation(a.negated()) * room_rotation(a), Matrix::identity(x, a.ring), "M(-alpha) M(alpha)");
    ColumnFiniteOperator c0 = cstab(TrigAngle::zero(Q())), c1 = cstab(TrigAngle::quarter(Q()));
    for (long long n = 0; n < 4; ++n)
      for (long long m = 0; m < 4; ++m) {
        c.same(c0.sandwich(unit_e(Q(), n, m)), unit_e(Q(), n, m), "C(0) sandwich");
        c.same(c1.sandwich(unit_e(Q(), n, m)), unit_e(Q(), n + 1, m + 1), "C(pi/2) sandwich");
      }
  }
  Matrix k = lift_matrix(random_finite(rng, nat(), nat(), Q(), 4), a.ring);
  Matrix l = lift_matrix(random_finite(rng, nat(), nat(), Q(), 4), a.ring);
  c.same(cs.sandwich(k * l), cs.sandwich(k) * cs.sandwich(l), "sandwich multiplicativity");

  if (i % 4 == 0) {
    IndexSet om = IndexSet::range(2);
    IdempotentPair p = finite_pair(rng, om);
    Matrix b = ss_regularize(p, [](const Pos& q) { return 3LL * q.strand; }).b;
    Stabilized st = stabilize_idempotent(b);
    c.same(st.value(TrigAngle::zero(Q())), b, "stabilization at 0");
    Matrix end = st.value(TrigAngle::quarter(Q()));
    c.same(end, st.endpoint, "stabilization at pi/2");
    bool ok = true;
    for (int bi = 0; bi < 2 && ok; ++bi)
      for (int bj = 0; bj < 2 && ok; ++bj)
        for (long long r = 0; r < 12 && ok; ++r)
          for (long long col = 0; col < 12 && ok; ++col) {
            Scalar want = (r % 2 == 0 && col % 2 == 0) ? b.entry({bi, r / 2}, {bj, col / 2})
                          : (bi == 1 && bj == 1 && r == col) ? Q().one() : Q().zero();
            ok = end.entry({bi, r}, {bj, col}) == want;
          }
    c.check(ok, "interleaved endpoint pattern");
  }
  auto [g, gi] = random_local_unit(rng, nat(), Q(), 3);
  Morphism room = make_room(g, gi, a);
  c.same(room.psi * room.psi_inv, Matrix::identity(room.psi.rows(), a.ring), "make_room unit");
}

void fam_transport(Ctx& c, Rng&, int) {
  const double omega = 20;
  IdempotentPath coarse = rotation_path(omega, 1e-3), fine = rotation_path(omega, 5e-4);
  Matrix p0 = coarse.sample(0), p1 = coarse.sample(1);
  double r1 = conjugation_residual(transport(coarse, 0, 1), p0, p1);
  double r2 = conjugation_residual(transport(fine, 0, 1), p0, p1);
  c.bound(r1, 1e-6, "transport residual at step 1e-3");
  c.metric("transport residual at step 5e-4", r2);
  double ratio = r1 / std::max(r2, 1e-300);
  c.metric("halving ratio", ratio);
  c.check(ratio >= 8, "fourth-order convergence", "ratio " + std::to_string(ratio));
}

NearIdempotent near_instance(Rng& rng, const IndexSet& omega, double target) {
  IndexSet two = unite(omega, omega);
  Ring f = Ring::floats();
  Matrix d = to_float(r0_pattern(omega, Q())).with_shape(two, two);
  Matrix g = Matrix::identity(two, f) + f.from_double(0.1) * to_float(random_finite(rng, two, two, Q(), 2, 0.5));
  Matrix p = g * d * window_inverse(g);
  Matrix noise = to_float(random_finite(rng, p.rows(), p.cols(), Q(), 2, 0.5));
  double scale = target / std::max(1.0, window_norm(noise)) / std::max(1.0, window_norm(p) * window_norm(p));
  NearIdempotent x = NearIdempotent::make(p + f.from_double(scale) * noise, p);
  while (x.defect > target) {
    scale /= 2;
    x = NearIdempotent::make(p + f.from_double(scale) * noise, p);
  }
  return x;
}

Matrix decaying_idempotent(double scale, long long len) {
  Ring f = Ring::floats();
  Matrix r0 = r0_pattern(nat(), f);
  Matrix k(r0.rows(), r0.cols(), f), l(r0.rows(), r0.cols(), f);
  for (long long i = 0; i < len; ++i)
    for (long long j = 0; j < len; ++j) {
      k.add_entry({0, i}, {1, j}, f.from_double(scale * std::pow(0.3, i + j)));
      l.add_entry({1, i}, {0, j}, f.from_double(0.5 * scale * std::pow(0.3, i + j + 1)));
    }
  Matrix one = Matrix::identity(r0.rows(), f);
  return (one + k) * (one + l) * r0 * (one - l) * (one - k);
}

void fam_analytic(Ctx& c, Rng& rng, int i) {
  IndexSet om = mixed_space(i);
  NearIdempotent x = near_instance(rng, om, 0.05);
  c.check(x.defect <= kMaxIdemDefect, "instance defect");
  Matrix qn = idem(x, IdemMethod::Newton), qs = idem(x, IdemMethod::Series, 8);
  c.bound(window_norm(qn * qn - qn), 1e-10, "idem Newton ||Q^2 - Q||");
  c.bound(window_norm(qs * qs - qs), 1e-10, "idem series ||Q^2 - Q||");
  c.bound(window_norm(qn - qs), 1e-8, "idem method agreement");

  Matrix p = x.reference, one = Matrix::identity(p.rows(), p.ring());
  Matrix s = sign_connector(p, qn);
  c.bound(window_norm(s * s - one), 1e-9, "sign connector ||S^2 - 1||");
  c.bound(window_norm(s * p - qn * s), 1e-9, "sign connector ||SP - QS||");

  Matrix pe = random_local_idempotent(rng, om, Q()), qe = random_local_idempotent(rng, om, Q());
  Matrix reflect = Matrix::identity(om, Q()) - Q().from_int(2) * qe;
  c.same(reflect * connector_corrected(pe, qe), connector_plain(pe, qe), "1-P-Q = (1-2Q)(1-P-Q+2QP)");
  c.same(connector_plain(pe, qe) * pe, qe * connector_plain(pe, qe), "1-P-Q intertwines");

  if (i % 5 == 0) {
    Matrix big = decaying_idempotent(0.02 + 0.02 * (i % 4), 30);
    Reduction red = finite_reduce(big, r0_pattern(nat(), Ring::floats()), 1e-3);
    c.bound(red.residual, 1e-8, "finite_reduce connector residual");
  }
}

FredholmPair fred_finite(Rng& rng, int n0, int n1) {
  IndexSet o0 = IndexSet::range(n0), o1 = IndexSet::range(n1);
  return FredholmPair::make(random_finite(rng, o1, o0, Q(), 1, 0.7), random_finite(rng, o0, o1, Q(), 1, 0.7));
}

FredholmPair fred_shift(Rng& rng, int k, bool sloppy) {
  FredholmPair s = shift_pair(Q());
  Matrix psi = Matrix::identity(nat(), Q()), phi = psi;
  for (int i = 0; i < k; ++i) {
    psi = s.psi * psi;
    phi = phi * s.phi;
  }
  auto [u, ui] = random_local_unit(rng, nat(), Q());
  psi = u * psi;
  phi = phi * ui;
  if (sloppy) psi = psi + random_finite(rng, nat(), nat(), Q(), 3);
  return FredholmPair::make(psi, phi);
}

Matrix offdiag(const Matrix& x, const Matrix& y) {
  IndexSet s = block_space({"0", "1"}, x.rows());
  Matrix z = Matrix::zero(x.rows(), x.cols(), x.ring());
  return assemble(s, s, {{z, x}, {y, z}});
}

mpq_class chi_q(const IdempotentPair& p) { return std::get<mpq_class>(chi(p).payload()); }

void fam_fredholm(Ctx& c, Rng& rng, int i) {
  int k = i % 4;
  FredholmPair fp = i % 2 ? fred_finite(rng, 1 + i % 3, 1 + (i / 2) % 3) : fred_shift(rng, k, i % 3 == 0);
  Matrix f = fredholm_F(fp);
  c.same(f * f, Matrix::identity(f.rows(), Q()), "F(psi,phi)^2 = 1");
  std::vector<Matrix> fac = fredholm_F_factors(fp);
  c.same(fac[0] * fac[1] * fac[2], f, "F equals its factorization");

  FredholmPair sh = fred_shift(rng, k, i % 2 == 0);
  mpq_class cs = chi_q(index_F(sh));
  c.check(cs == k, "chi(Ind_F) of shift power", "got " + cs.get_str() + " want " + std::to_string(k));
  auto [u, ui] = random_local_unit(rng, nat(), Q());
  c.check(chi_q(index_F(FredholmPair::make(u, ui))) == 0, "chi(Ind_F) = 0 on invertibles");
  FredholmPair h = fred_shift(rng, (i + 1) % 3, false);
  mpq_class ch = chi_q(index_F(h));
  c.check(chi_q(index_F(fred_sum(sh, h))) == cs + ch, "chi(Ind_F) additive over sums");
  c.check(chi_q(index_F(fred_compose(h, sh))) == cs + ch, "chi(Ind_F) additive over composition");
  c.check(chi_q(index_F(fred_inv(sh))) == -cs, "chi(Ind_F) negated by inv");
  FredholmPair moved = FredholmPair::make(sh.psi + random_finite(rng, nat(), nat(), Q(), 3), sh.phi);
  c.check(chi_q(index_F(moved)) == cs, "chi(Ind_F) invariant under finite perturbation");

  FredholmPair f2 = fred_finite(rng, 1 + i % 3, 1 + (i / 2) % 2);
  mpq_class c2 = chi_q(index_F(f2));
  mpq_class raw = chi_q(index_F(fred_tensor_left(sh, f2, TensorVariant::Raw)));
  mpq_class red = chi_q(index_F(fred_tensor_left(sh, f2, TensorVariant::Reduced)));
  c.check(raw == red, "raw and reduced tensor have equal chi", raw.get_str() + " vs " + red.get_str());
  c.check(raw == cs * c2, "tensor chi is the product");

  IndexSet n2 = block_space({"0", "1"}, nat());
  Matrix a = direct_sum(Matrix::zero(nat(), nat(), Q()), Matrix::identity(nat(), Q())).with_shape(n2, n2);
  Matrix one = Matrix::identity(n2, Q());
  auto [x, xi] = random_local_unit(rng, nat(), Q());
  auto [y, yi] = random_local_unit(rng, nat(), Q());
  Matrix z = offdiag(x, y), z_inv = offdiag(yi, xi);
  Matrix t = tilde_correction(z, z_inv, a);
  c.same(t * t, one, "xi~^2 = 1 for eta = xi^-1");
  Matrix sloppy = tilde_correction(z, z_inv + random_finite(rng, n2, n2, Q(), 2), a);
  c.check((sloppy * sloppy - one).is_K(), "xi~^2 - 1 finitely supported");
  if (i == 0) {
    FredholmPair s = shift_pair(Q());
    Matrix ts = tilde_correction(offdiag(s.phi, s.psi), offdiag(s.phi, s.psi), a);
    c.check((ts * ts - one).is_K(), "xi~^2 - 1 finitely supported (unilateral shift)");
    c.check(chi_q(index_F(s)) == 1, "chi(Ind_F) of the unilateral shift is +1");
    c.check(chi_q(index_F(fred_compose(s, s))) == 2, "shift o shift has chi 2");
  }
}

struct Family {
  const char* name;
  const char* suite;
  bool fixed;  // one deterministic case regardless of the requested count
  void (*run)(Ctx&, Rng&, int);
};

const std::vector<Family>& families() {
  static const std::vector<Family> f = {
      {"conjugation", "grassmann", false, fam_conjugation},
      {"cancellation", "grassmann", false, fam_cancellation},
      {"hring", "grassmann", false, fam_hring},
      {"chi", "grassmann", false, fam_chi},
      {"regular", "regular", false, fam_regular},
      {"dim", "regular", false, fam_dim},
      {"qu1", "stab", true, fam_qu1},
      {"stab", "stab", false, fam_stab},
      {"transport", "analytic", true, fam_transport},
      {"analytic", "analytic", false, fam_analytic},
      {"fredholm", "fredholm", false, fam_fredholm},
  };
  return f;
}

std::string scalar_text(const Scalar& s) {
  std::string t = s.to_string();
  return t.find_first_of(" +-*") == std::string::npos ? t : "(" + t + ")";
}

}  // namespace

long long SuiteReport::checks() const {
  long long n = 0;
  for (const auto& f : families) n += f.checks;
  return n;
}

long long SuiteReport::failure_count() const {
  long long n = 0;
  for (const auto& f : families) n += static_cast<long long>(f.failures.size());
  return n;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> n = {"all", "grassmann", "regular", "stab", "analytic", "fredholm"};
  return n;
}

std::vector<std::string> suite_families(const std::string& suite) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw std::invalid_argument("unknown suite \"" + suite + "\"");
  std::vector<std::string> out;
  for (const Family& f : families())
    if (suite == "all" || suite == f.suite) out.push_back(f.name);
  return out;
}

FamilyReport run_family(const std::string& name, std::uint64_t seed, int cases) {
  auto it = std::find_if(families().begin(), families().end(), [&](const Family& f) { return name == f.name; });
  if (it == families().end()) throw std::invalid_argument("unknown family \"" + name + "\"");
  FamilyReport rep;
  rep.name = name;
  auto t0 = Clock::now();
  int n = it->fixed ? 1 : cases;
  for (int i = 0; i < n; ++i) {
    std::uint64_t s = seed ^ static_cast<std::uint64_t>(i);
    Ctx ctx(rep, s);
    Rng rng(s);
    try {
      it->run(ctx, rng, i);
    } catch (const std::exception& e) {
      ctx.fail(name + " case " + std::to_string(i), e.what());
    }
  }
  rep.seconds = since(t0);
  return rep;
}

SuiteReport run_suite(const std::string& suite, std::uint64_t seed, int cases) {
  SuiteReport rep;
  rep.suite = suite;
  rep.seed = seed;
  rep.cases = cases;
  auto t0 = Clock::now();
  for (const std::string& f : suite_families(suite)) rep.families.push_back(run_family(f, seed, cases));
  rep.seconds = since(t0);
  return rep;
}

Json report_to_json(const SuiteReport& r) {
  Json fams = Json::array();
  for (const FamilyReport& f : r.families) {
    Json fails = Json::array();
    for (const CaseFailure& c : f.failures)
      fails.push_back({{"seed", c.seed}, {"construction", c.construction}, {"detail", c.detail}});
    Json metrics = Json::object();
    for (const auto& [k, v] : f.metrics) metrics[k] = v;
    fams.push_back({{"family", f.name},
                    {"checks", f.checks},
                    {"failures", fails},
                    {"metrics", metrics},
                    {"seconds", f.seconds}});
  }
  return {{"suite", r.suite},       {"seed", r.seed},          {"cases", r.cases},
          {"checks", r.checks()},   {"failures", r.failure_count()},
          {"passed", r.passed()},   {"seconds", r.seconds},    {"families", fams}};
}

Qu1Demo demo_qu1() {
  TrigAngle a = TrigAngle::symbolic();
  const Ring& r = a.ring;
  Qu1Demo d;
  d.image = v_map(qu1_apply(cstab(a), WedgeVector::basis(r, {0, 1}, r.one())));
  d.expected = {{3, a.s}, {5, -(a.s * a.t)}, {6, a.t * a.t}};
  d.pass = d.image == d.expected;
  std::string terms;
  for (const auto& [code, v] : d.image) {
    if (!terms.empty()) terms += " + ";
    terms += scalar_text(v) + "*e" + std::to_string(code);
  }
  d.text = "V Qu1 C(theta) e3 = " + (terms.empty() ? std::string("0") : terms) +
           "\nexpected s*e3 - s*t*e5 + t^2*e6 (t^2 = 1 - s^2 in normal form): " + (d.pass ? "PASS" : "FAIL");
  return d;
}

std::string first_difference(const Matrix& a, const Matrix& b) {
  if (!a.rows().same_layout(b.rows()) || !a.cols().same_layout(b.cols()))
    return "shape " + a.rows().to_string() + " x " + a.cols().to_string() + " vs " + b.rows().to_string() + " x " +
           b.cols().to_string();
  Matrix d = a - b.with_shape(a.rows(), a.cols());
  if (d.is_zero()) return "";
  if (!d.fin().empty()) {
    const FinKey& k = d.fin().begin()->first;
    return "entry " + index_to_json(index_at(a.rows(), k.row())).dump() + "," +
           index_to_json(index_at(a.cols(), k.col())).dump() + ": " + a.entry(k.row(), k.col()).to_string() +
           " vs " + b.entry(k.row(), k.col()).to_string();
  }
  const auto& [key, lau] = *d.symbols().begin();
  return "symbol on strands (" + std::to_string(key.first) + "," + std::to_string(key.second) + ") z^" +
         std::to_string(lau.begin()->first) + " differs by " + lau.begin()->second.to_string();
}

}  // namespace vgrass
