// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include "vgrass/grass.hpp"

#include <map>
#include <set>
#include <sstream>

namespace vgrass {

namespace {

struct Core {
  Matrix h00, h01, h10, h11;
};

Core core(const Matrix& b, const Matrix& a) {
  Matrix d = b - a, ab = complement(a);
  return {ab * d * ab, ab * d * a, a * d * ab, a * d * a};
}

std::string describe_difference(const Matrix& x, const Matrix& y) {
  Matrix d = x - y;
  std::ostringstream os;
  if (!d.symbols().empty()) {
    auto it = d.symbols().begin();
    os << "symbol block (" << it->first.first << "," << it->first.second << ") differs";
    return os.str();
  }
  for (const auto& [k, v] : d.fin()) {
    if (x.ring().near_zero(v)) continue;
    os << "entry (" << k.rs << ":" << k.rp << ", " << k.cs << ":" << k.cp << ") differs by " << v.to_string();
    return os.str();
  }
  return "";
}

bool check_equal(const Matrix& x, const Matrix& y, const std::string& what, std::string& out) {
  if (!x.rows().same_layout(y.rows()) || !x.cols().same_layout(y.cols())) {
    out = what + ": shape mismatch";
    return false;
  }
  if (equal(x, y)) return true;
  out = what + ": " + describe_difference(x, y);
  return false;
}

std::vector<std::string> labels_for(int k) {
  static const char* names[] = {"0", "1", "0'", "1'", "0''", "1''"};
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i) out.push_back(k <= 6 ? names[i] : std::to_string(i));
  return out;
}

IndexSet space3(const IndexSet& omega) { return block_space({"0", "0'", "0''"}, omega); }
IndexSet space6(const IndexSet& omega) { return block_space(labels_for(6), omega); }
IndexSet space2(const IndexSet& omega) { return block_space({"0", "1"}, omega); }

Matrix product_of(const IndexSet& space, const std::vector<Matrix>& factors) {
  Matrix acc = Matrix::identity(space, factors.front().ring());
  for (const auto& f : factors) acc = acc * f;
  return acc;
}

Matrix reversed_product(const IndexSet& space, const std::vector<Matrix>& factors) {
  Matrix acc = Matrix::identity(space, factors.front().ring());
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) acc = acc * *it;
  return acc;
}

void require_square_on(const Morphism& m, const IndexSet& omega) {
  if (!m.source().same_layout(omega) || !m.target().same_layout(omega))
    throw GrassError("morphism must act on the space of the pair");
}

// The conjugator of cancellation: Omega u P u P -> P u P.
Morphism cancellation_morphism(const Matrix& e) {
  const IndexSet& omega = e.rows();
  IndexSet pad = cancellation_pad(omega);
  CancelB cb = cancel_B(e);
  Matrix perm = part_permutation({omega, pad, pad}, {1, 0, 2}, e.ring());
  return Morphism::diagonal(cb.split.psi * perm, perm.transpose() * cb.split.psi_inv);
}

std::vector<Pad> cancellation_pads(const IndexSet& omega) {
  IndexSet pad = cancellation_pad(omega);
  return {{PadKind::One, pad}, {PadKind::Zero, pad}};
}

}  // namespace

IdempotentPair::IdempotentPair(Matrix b_, Matrix a_) : space(b_.rows()), b(std::move(b_)), a(std::move(a_)) {
  if (!b.is_square() || !a.is_square() || !b.rows().same_layout(a.rows()))
    throw GrassError("pair terms must be square over one space");
  if (b.ring() != a.ring()) throw GrassError("pair terms over different rings");
  if (!is_idempotent(b)) throw GrassError("leading term is not idempotent");
  if (!is_idempotent(a)) throw GrassError("base term is not idempotent");
  if (!approx_equiv(b, a)) throw GrassError("leading and base terms differ by more than a finite matrix");
}

IdempotentPair IdempotentPair::unchecked(Matrix b, Matrix a) {
  IdempotentPair p;
  p.space = b.rows();
  p.b = std::move(b);
  p.a = std::move(a);
  return p;
}

bool is_valid_pair(const IdempotentPair& p) {
  return p.b.is_square() && p.a.is_square() && p.b.rows().same_layout(p.a.rows()) && is_idempotent(p.b) &&
         is_idempotent(p.a) && approx_equiv(p.b, p.a);
}

IdempotentPair pair_zero(const IndexSet& x, const Ring& ring) {
  return IdempotentPair::unchecked(Matrix::zero(x, x, ring), Matrix::zero(x, x, ring));
}

IdempotentPair pair_zero_prime(const IndexSet& x, const Ring& ring) {
  return IdempotentPair::unchecked(Matrix::identity(x, ring), Matrix::identity(x, ring));
}

IdempotentPair pair_one(const Ring& ring) {
  IndexSet pt = IndexSet::range(1);
  return IdempotentPair::unchecked(Matrix::identity(pt, ring), Matrix::zero(pt, pt, ring));
}

IdempotentPair pair_trivial(const Matrix& a) { return IdempotentPair(a, a); }

IdempotentPair pair_empty(const Ring& ring) { return pair_zero(IndexSet(), ring); }

IdempotentPair pair_sum(const IdempotentPair& p, const IdempotentPair& q) {
  return IdempotentPair::unchecked(direct_sum(p.b, q.b), direct_sum(p.a, q.a));
}

IdempotentPair pair_sum(const std::vector<IdempotentPair>& parts) {
  if (parts.empty()) throw GrassError("pair_sum of nothing");
  IdempotentPair acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) acc = pair_sum(parts[i], acc);
  return acc;
}

IdempotentPair pair_inv(const IdempotentPair& p) {
  return IdempotentPair::unchecked(complement(p.b), complement(p.a));
}

IdempotentPair pair_inv_prime(const IdempotentPair& p) { return IdempotentPair::unchecked(p.a, p.b); }

IdempotentPair pair_prime(const IdempotentPair& p) {
  return IdempotentPair::unchecked(complement(p.a), complement(p.b));
}

IdempotentPair tensor_left(const IdempotentPair& p, const IdempotentPair& q) {
  Matrix bb = complement(p.b), ab = complement(p.a);
  return IdempotentPair::unchecked(kronecker(p.b, q.b) + kronecker(bb, q.a),
                                   kronecker(p.a, q.b) + kronecker(ab, q.a));
}

IdempotentPair tensor_right(const IdempotentPair& p, const IdempotentPair& q) {
  Matrix db = complement(q.b), cb = complement(q.a);
  return IdempotentPair::unchecked(kronecker(p.b, q.b) + kronecker(p.a, db),
                                   kronecker(p.b, q.a) + kronecker(p.a, cb));
}

IdempotentPair reshape(const IdempotentPair& p, const IndexSet& space) {
  return IdempotentPair::unchecked(p.b.with_shape(space, space), p.a.with_shape(space, space));
}

IdempotentPair push_forward(const Relabeling& r, const IdempotentPair& p) {
  return IdempotentPair::unchecked(push_forward(r, p.b), push_forward(r, p.a));
}

Scalar chi(const IdempotentPair& p) { return finite_trace(p.b - p.a); }

Morphism Morphism::make(Matrix psi, Matrix phi, Matrix psi_inv, Matrix phi_inv) {
  return {std::move(psi), std::move(phi), std::move(psi_inv), std::move(phi_inv)};
}

Morphism Morphism::diagonal(Matrix g, Matrix g_inv) { return {g, g, g_inv, g_inv}; }

Morphism Morphism::identity(const IndexSet& set, const Ring& ring) {
  Matrix one = Matrix::identity(set, ring);
  return {one, one, one, one};
}

IdempotentPair Morphism::apply(const IdempotentPair& p) const {
  return IdempotentPair::unchecked(psi * p.b * psi_inv, phi * p.a * phi_inv);
}

std::string morphism_defect(const Morphism& m) {
  std::string out;
  const Ring& ring = m.psi.ring();
  Matrix one_t = Matrix::identity(m.target(), ring), one_s = Matrix::identity(m.source(), ring);
  if (!check_equal(m.psi * m.psi_inv, one_t, "psi psi^-1", out)) return out;
  if (!check_equal(m.psi_inv * m.psi, one_s, "psi^-1 psi", out)) return out;
  if (!check_equal(m.phi * m.phi_inv, one_t, "phi phi^-1", out)) return out;
  if (!check_equal(m.phi_inv * m.phi, one_s, "phi^-1 phi", out)) return out;
  if (!approx_equiv(m.psi, m.phi)) return "psi - phi is not finitely supported";
  return "";
}

Morphism compose(const Morphism& g, const Morphism& f) {
  return {g.psi * f.psi, g.phi * f.phi, f.psi_inv * g.psi_inv, f.phi_inv * g.phi_inv};
}

Morphism compose(const std::vector<Morphism>& chain) {
  if (chain.empty()) throw GrassError("compose of nothing");
  Morphism acc = chain.front();
  for (size_t i = 1; i < chain.size(); ++i) acc = compose(chain[i], acc);
  return acc;
}

Morphism direct_sum(const Morphism& f, const Morphism& g) {
  return {direct_sum(f.psi, g.psi), direct_sum(f.phi, g.phi), direct_sum(f.psi_inv, g.psi_inv),
          direct_sum(f.phi_inv, g.phi_inv)};
}

Morphism direct_sum(const std::vector<Morphism>& parts) {
  if (parts.empty()) throw GrassError("direct_sum of nothing");
  Morphism acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) acc = direct_sum(parts[i], acc);
  return acc;
}

Matrix part_permutation(const std::vector<IndexSet>& parts, const std::vector<int>& order, const Ring& ring) {
  if (order.size() != parts.size()) throw GrassError("part_permutation: order has the wrong length");
  std::vector<int> src_off(parts.size());
  int off = 0;
  for (size_t i = 0; i < parts.size(); ++i) {
    src_off[i] = off;
    off += parts[i].strand_count();
  }
  std::vector<IndexSet> reordered;
  for (int j : order) reordered.push_back(parts.at(j));
  IndexSet src = unite(parts), dst = unite(reordered);
  Matrix m(dst, src, ring);
  int t = 0;
  for (int j : order) {
    for (int s = 0; s < parts[j].strand_count(); ++s, ++t) {
      int from = src_off[j] + s;
      if (src.is_tail(from)) m.add_symbol(t, from, 0, ring.one());
      else m.add_entry({t, 0}, {from, 0}, ring.one());
    }
  }
  return m;
}

Morphism permutation_morphism(const std::vector<IndexSet>& parts, const std::vector<int>& order, const Ring& ring) {
  Matrix p = part_permutation(parts, order, ring);
  return Morphism::diagonal(p, p.transpose());
}

IdempotentPair padded(const IdempotentPair& p, const std::vector<Pad>& pads) {
  IdempotentPair acc = p;
  for (const auto& pad : pads)
    acc = pair_sum(acc, pad.kind == PadKind::Zero ? pair_zero(pad.set, p.ring()) : pair_zero_prime(pad.set, p.ring()));
  return acc;
}

std::string witness_failure(const HomotopyWitness& w) {
  if (!is_valid_pair(w.lhs)) return "lhs is not a valid pair";
  if (!is_valid_pair(w.rhs)) return "rhs is not a valid pair";
  IdempotentPair l = padded(w.lhs, w.pads_lhs), r = padded(w.rhs, w.pads_rhs);
  if (!w.conj.source().same_layout(l.space)) return "conjugator source does not match the padded lhs";
  if (!w.conj.target().same_layout(r.space)) return "conjugator target does not match the padded rhs";
  std::string out = morphism_defect(w.conj);
  if (!out.empty()) return out;
  if (!check_equal(w.conj.psi * l.b * w.conj.psi_inv, r.b, "leading term", out)) return out;
  if (!check_equal(w.conj.phi * l.a * w.conj.phi_inv, r.a, "base term", out)) return out;
  return "";
}

bool verify_witness(const HomotopyWitness& w) { return witness_failure(w).empty(); }

IndexSet block_space(const std::vector<std::string>& labels, const IndexSet& omega) {
  std::vector<Atom> atoms(labels.begin(), labels.end());
  return blocks(atoms, omega);
}

Matrix block_diag(const IndexSet& space, const std::vector<Matrix>& diag) {
  const Ring& ring = diag.front().ring();
  std::vector<std::vector<Matrix>> grid(diag.size());
  for (size_t i = 0; i < diag.size(); ++i)
    for (size_t j = 0; j < diag.size(); ++j)
      grid[i].push_back(i == j ? diag[i] : Matrix::zero(diag[i].rows(), diag[j].cols(), ring));
  return assemble(space, space, grid);
}

Matrix sw(const IndexSet& space, int n, int m, const Matrix& a) {
  const IndexSet& omega = a.rows();
  int per = omega.strand_count();
  if (per == 0) return Matrix::identity(space, a.ring());
  int k = space.strand_count() / per;
  if (k * per != space.strand_count() || n == m || n < 0 || m < 0 || n >= k || m >= k)
    throw GrassError("sw: block positions do not fit the space");
  const Ring& ring = a.ring();
  Matrix one = Matrix::identity(omega, ring), zero = Matrix::zero(omega, omega, ring), ab = complement(a);
  std::vector<std::vector<Matrix>> grid(k, std::vector<Matrix>(k, zero));
  for (int i = 0; i < k; ++i) grid[i][i] = one;
  grid[n][n] = ab;
  grid[m][m] = ab;
  grid[n][m] = a;
  grid[m][n] = a;
  return assemble(space, space, grid);
}

Matrix regularized_matrix(const Matrix& b, const Matrix& a) {
  IndexSet space = space2(a.rows());
  Matrix s = sw(space, 0, 1, a);
  return s * block_diag(space, {b, complement(a)}) * s;
}

IdempotentPair regularize_pair(const IdempotentPair& p) {
  return IdempotentPair::unchecked(regularized_matrix(p.b, p.a), r0_pattern(p.space, p.ring()));
}

Matrix r0_pattern(const IndexSet& omega, const Ring& ring) {
  return block_diag(space2(omega), {Matrix::zero(omega, omega, ring), Matrix::identity(omega, ring)});
}

IdempotentPair pair_r0(const IndexSet& omega, const Ring& ring) {
  Matrix r = r0_pattern(omega, ring);
  return IdempotentPair::unchecked(r, r);
}

Morphism regularize_morphism(const Morphism& m, const Matrix& a) {
  const Ring& ring = a.ring();
  IndexSet st = space2(m.target()), ss = space2(m.source());
  Matrix a_phi = m.phi * a * m.phi_inv;
  auto pair_block = [&](const Matrix& x, const Matrix& y) {
    return assemble(space2(x.rows()), space2(x.cols()),
                    {{x, Matrix::zero(x.rows(), y.cols(), ring)}, {Matrix::zero(y.rows(), x.cols(), ring), y}});
  };
  Matrix r = sw(st, 0, 1, a_phi) * pair_block(m.psi, m.phi) * sw(ss, 0, 1, a);
  Matrix r_inv = sw(ss, 0, 1, a) * pair_block(m.psi_inv, m.phi_inv) * sw(st, 0, 1, a_phi);
  return {r, pair_block(m.phi, m.phi), r_inv, pair_block(m.phi_inv, m.phi_inv)};
}

HomotopyWitness regularization_witness(const IdempotentPair& p) {
  Matrix ab = complement(p.a);
  Matrix s = sw(space2(p.space), 0, 1, p.a);
  return {"regularization", pair_sum(p, pair_trivial(ab)), regularize_pair(p), {}, {}, Morphism::diagonal(s, s)};
}

Morphism translation_H(const IdempotentPair& p) {
  IndexSet space = space3(p.space);
  std::vector<Matrix> f = {sw(space, 1, 2, p.a), sw(space, 1, 2, p.b), sw(space, 0, 1, p.b), sw(space, 0, 1, p.a)};
  Matrix one = Matrix::identity(space, p.ring());
  return {product_of(space, f), one, reversed_product(space, f), one};
}

namespace {

std::vector<Matrix> hr_factors(const IdempotentPair& p) {
  IndexSet space = space6(p.space);
  Matrix ab = complement(p.a);
  std::vector<Matrix> outer = {sw(space, 0, 1, p.a), sw(space, 2, 3, ab), sw(space, 4, 5, p.a)};
  std::vector<Matrix> f = outer;
  for (auto m : {sw(space, 2, 4, p.a), sw(space, 2, 4, p.b), sw(space, 0, 2, p.b), sw(space, 0, 2, p.a)})
    f.push_back(m);
  f.insert(f.end(), outer.begin(), outer.end());
  return f;
}

}  // namespace

Morphism translation_HR(const IdempotentPair& p) {
  IndexSet space = space6(p.space);
  auto f = hr_factors(p);
  Matrix one = Matrix::identity(space, p.ring());
  return {product_of(space, f), one, reversed_product(space, f), one};
}

Tamed tame_T(const Morphism& m, const IdempotentPair& p) {
  require_square_on(m, p.space);
  IndexSet space = space3(p.space);
  const Ring& ring = p.ring();
  Matrix one = Matrix::identity(p.space, ring);
  Morphism h = translation_H(p);
  Matrix psi = block_diag(space, {m.psi, one, one}), psi_inv = block_diag(space, {m.psi_inv, one, one});
  Matrix phi = block_diag(space, {m.phi, one, one}), phi_inv = block_diag(space, {m.phi_inv, one, one});
  Matrix t = psi * h.psi * phi_inv * h.psi_inv;
  Matrix t_inv = h.psi * phi * h.psi_inv * psi_inv;
  Matrix id = Matrix::identity(space, ring);
  return {{t, id, t_inv, id}, m.phi * p.a == p.a * m.phi};
}

Tamed tame_T_prime(const Morphism& m, const IdempotentPair& p) {
  Tamed t = tame_T(m, p);
  Matrix s = sw(space3(p.space), 1, 2, p.a);
  t.conj.psi = s * t.conj.psi * s;
  t.conj.psi_inv = s * t.conj.psi_inv * s;
  return t;
}

// The middle factor uses (phi + phi)^-1 so that TR is the identity on <phi,phi> over <a,a>.
Morphism tame_TR(const Morphism& m, const IdempotentPair& p) {
  require_square_on(m, p.space);
  IndexSet space = space6(p.space);
  const Ring& ring = p.ring();
  Matrix one = Matrix::identity(p.space, ring);
  Morphism r = regularize_morphism(m, p.a);
  Morphism hr = translation_HR(p);
  auto lift = [&](const Matrix& x) {
    Matrix e = extract(x, 0, 0, p.space, p.space), f = extract(x, 0, p.space.strand_count(), p.space, p.space);
    Matrix g = extract(x, p.space.strand_count(), 0, p.space, p.space);
    Matrix h = extract(x, p.space.strand_count(), p.space.strand_count(), p.space, p.space);
    Matrix z = Matrix::zero(p.space, p.space, ring);
    return assemble(space, space,
                    {{e, f, z, z, z, z},
                     {g, h, z, z, z, z},
                     {z, z, one, z, z, z},
                     {z, z, z, one, z, z},
                     {z, z, z, z, one, z},
                     {z, z, z, z, z, one}});
  };
  Matrix x = lift(r.psi), x_inv = lift(r.psi_inv);
  Matrix y = lift(r.phi_inv), y_inv = lift(r.phi);
  Matrix tr = x * hr.psi * y * hr.psi_inv;
  Matrix tr_inv = hr.psi * y_inv * hr.psi_inv * x_inv;
  Matrix id = Matrix::identity(space, ring);
  return {tr, id, tr_inv, id};
}

IndexSet cancellation_pad(const IndexSet& omega) {
  if (!omega.is_finite()) throw GrassError("cancellation needs a finite base index set");
  return product(IndexSet::tail_n("p"), omega);
}

CancelB cancel_B(const Matrix& a) {
  const IndexSet& omega = a.rows();
  if (!omega.is_finite()) throw GrassError("cancel_B needs a finite base index set");
  const Ring& ring = a.ring();
  Matrix ab = complement(a);
  CancelB out;

  IndexSet hz = IndexSet::tail_z("h"), zz = IndexSet::tail_z("z");
  Matrix one_z = Matrix::shift(hz, zz, ring, 0, 0, 0);
  out.bz = kronecker_central(Matrix::shift(hz, zz, ring, 0, 0, -1), a) + kronecker_central(one_z, ab);
  out.bz_inv = kronecker_central(Matrix::shift(zz, hz, ring, 0, 0, 1), a) +
               kronecker_central(Matrix::shift(zz, hz, ring, 0, 0, 0), ab);

  // Source strands: Z^- (k <-> -1-k), the point 0, Z^+ (k <-> 1+k).
  // Target strands: -1/2-N (k <-> -1/2-k), 1/2+N (k <-> 1/2+k).
  IndexSet src = unite({IndexSet::tail_n("m"), IndexSet::range(1), IndexSet::tail_n("p")});
  IndexSet dst = unite(IndexSet::tail_n("hm"), IndexSet::tail_n("hp"));
  Matrix pa(dst, src, ring), pab(dst, src, ring);
  pa.add_symbol(0, 0, 1, ring.one());
  pab.add_symbol(0, 0, 0, ring.one());
  pa.add_entry({0, 0}, {1, 0}, ring.one());
  pab.add_entry({1, 0}, {1, 0}, ring.one());
  pa.add_symbol(1, 2, 0, ring.one());
  pab.add_symbol(1, 2, 1, ring.one());
  Matrix b = kronecker_central(pa, a) + kronecker_central(pab, ab);
  Matrix b_inv = kronecker_central(pa.transpose(), a) + kronecker_central(pab.transpose(), ab);
  out.split = Morphism::diagonal(b, b_inv);

  Matrix neg(src, src, ring), mid(src, src, ring), hneg(dst, dst, ring);
  neg.add_symbol(0, 0, 0, ring.one());
  mid.add_entry({1, 0}, {1, 0}, ring.one());
  hneg.add_symbol(0, 0, 0, ring.one());
  out.step_source = kronecker_central(neg, Matrix::identity(omega, ring)) + kronecker_central(mid, a);
  out.step_target = kronecker_central(hneg, Matrix::identity(omega, ring));
  return out;
}

HomotopyWitness cancellation_witness(const Matrix& e) {
  auto pads = cancellation_pads(e.rows());
  return {"cancellation", pair_trivial(e), pair_empty(e.ring()), pads, pads, cancellation_morphism(e)};
}

Morphism comm_C(const IdempotentPair& p, const IdempotentPair& q) {
  const Ring& ring = p.ring();
  if (!ring.commutative()) throw GrassError("comm_C needs a commutative ring");
  const Matrix &b = p.b, &a = p.a, &d = q.b, &c = q.a;
  Matrix ab = complement(a), cb = complement(c);
  IndexSet omega = product(p.space, q.space);
  IndexSet space = block_space(labels_for(4), omega);
  Matrix abcb = kronecker(ab, cb);
  std::vector<Matrix> f = {sw(space, 1, 0, kronecker(b, c) + kronecker(a, cb)),
                           sw(space, 1, 2, abcb),
                           sw(space, 1, 0, complement(kronecker(b, d))),
                           sw(space, 3, 2, abcb),
                           sw(space, 1, 2, abcb),
                           sw(space, 1, 0, kronecker(a, d) + kronecker(ab, c))};
  std::vector<Matrix> base = {sw(space, 0, 2, abcb), sw(space, 1, 3, abcb)};
  return {product_of(space, f), product_of(space, base), reversed_product(space, f), reversed_product(space, base)};
}

HomotopyWitness comm_witness(const IdempotentPair& p, const IdempotentPair& q) {
  IndexSet omega = product(p.space, q.space);
  IdempotentPair r0 = pair_r0(omega, p.ring());
  return {"commutativity", pair_sum(regularize_pair(tensor_left(p, q)), r0),
          pair_sum(regularize_pair(tensor_right(p, q)), r0), {}, {}, comm_C(p, q)};
}

HomotopyWitness additive_inverse_witness(const IdempotentPair& p) {
  IndexSet space = space2(p.space);
  Matrix sb = sw(space, 0, 1, p.b), sa = sw(space, 0, 1, p.a);
  return {"additive inverse",
          pair_sum(p, pair_inv(p)),
          pair_empty(p.ring()),
          {},
          {{PadKind::Zero, p.space}, {PadKind::One, p.space}},
          {sb, sa, sb, sa}};
}

// The order sw01(b) sw01(a) fails on random instances; sw01(lead) sw01(base) is the conjugator.
HomotopyWitness inv_prime_witness(const IdempotentPair& p) {
  IndexSet space = space2(p.space);
  Matrix g = sw(space, 0, 1, p.b) * sw(space, 0, 1, p.a);
  Matrix g_inv = sw(space, 0, 1, p.a) * sw(space, 0, 1, p.b);
  Matrix one = Matrix::identity(space, p.ring());
  return {"inv-prime variant", regularize_pair(p), regularize_pair(pair_prime(p)), {}, {}, {g, one, g_inv, one}};
}

HomotopyWitness prime_witness(const IdempotentPair& p) {
  const IndexSet& omega = p.space;
  const Ring& ring = p.ring();
  IndexSet pad = cancellation_pad(omega);
  Morphism id_omega = Morphism::identity(omega, ring), id_pads = Morphism::identity(unite(pad, pad), ring);
  Matrix ab = complement(p.a), bb = complement(p.b);
  IndexSet space = space2(omega);

  Morphism f1 = direct_sum(id_omega, cancellation_morphism(ab).inverse());
  Matrix s_a = sw(space, 0, 1, p.a);
  Morphism f2 = direct_sum(Morphism::diagonal(s_a, s_a), id_pads);
  Morphism f3 = direct_sum(inv_prime_witness(p).conj, id_pads);
  Matrix s_bb = sw(space, 0, 1, bb);
  Morphism f4 = direct_sum(Morphism::diagonal(s_bb, s_bb), id_pads);
  Morphism f5 = direct_sum(id_omega, cancellation_morphism(p.b));
  auto pads = cancellation_pads(omega);
  return {"prime", p, pair_prime(p), pads, pads, compose({f1, f2, f3, f4, f5})};
}

std::vector<HomotopyWitness> diff_decomposition(const Matrix& b, const Matrix& b_prime, const Matrix& a) {
  IdempotentPair check1(b, a), check2(b_prime, a);
  (void)check1;
  (void)check2;
  const IndexSet& omega = a.rows();
  const Ring& ring = a.ring();
  Matrix ab = complement(a);
  std::vector<HomotopyWitness> chain;

  IdempotentPair start(b, b_prime);
  IdempotentPair stabilized(direct_sum({a, ab, b}), direct_sum({a, ab, b_prime}));
  Matrix s = sw(space2(omega), 0, 1, a);
  Morphism m1 = compose(direct_sum(Morphism::diagonal(s, s), Morphism::identity(omega, ring)),
                        permutation_morphism({omega, omega, omega}, {1, 2, 0}, ring));
  chain.push_back({"stabilize", start, stabilized, {{PadKind::Zero, omega}, {PadKind::One, omega}}, {}, m1});

  IdempotentPair translated = IdempotentPair::unchecked(direct_sum({b, ab, a}), direct_sum({a, ab, b_prime}));
  chain.push_back({"translate", stabilized, translated, {}, {}, translation_H(IdempotentPair(b, a))});

  IndexSet pad = cancellation_pad(omega);
  IdempotentPair split = pair_sum(IdempotentPair(b, a), IdempotentPair(a, b_prime));
  Morphism m3 = compose(direct_sum(Morphism::identity(unite(omega, omega), ring), cancellation_morphism(ab)),
                        permutation_morphism({omega, omega, omega, pad, pad}, {0, 2, 1, 3, 4}, ring));
  auto pads = cancellation_pads(omega);
  chain.push_back({"cancel", translated, split, pads, pads, m3});

  IdempotentPair target = pair_sum(IdempotentPair(b, a), pair_inv(IdempotentPair(b_prime, a)));
  Morphism m4 = direct_sum(Morphism::identity(omega, ring), prime_witness(IdempotentPair(a, b_prime)).conj);
  chain.push_back({"reassociate", split, target, pads, pads, m4});
  return chain;
}

HomotopyWitness r_morphism_witness(const IdempotentPair& p, const Morphism& m) {
  return {"regularized morphism", regularize_pair(p), regularize_pair(m.apply(p)), {}, {},
          regularize_morphism(m, p.a)};
}

HomotopyWitness translation_witness(const IdempotentPair& p) {
  Matrix ab = complement(p.a);
  Matrix base = direct_sum({p.a, ab, p.a});
  return {"translation", IdempotentPair::unchecked(direct_sum({p.a, ab, p.b}), base),
          IdempotentPair::unchecked(direct_sum({p.b, ab, p.a}), base), {}, {}, translation_H(p)};
}

HomotopyWitness regularized_translation_witness(const IdempotentPair& p) {
  IdempotentPair r0 = pair_r0(p.space, p.ring()), rp = regularize_pair(p);
  return {"regularized translation", pair_sum({r0, r0, rp}), pair_sum({rp, r0, r0}), {}, {}, translation_HR(p)};
}

HomotopyWitness stable_taming_witness(const IdempotentPair& p, const Morphism& m) {
  IdempotentPair moved = m.apply(p);
  if (moved.a != p.a) throw GrassError("stable taming needs a morphism fixing the base term");
  IdempotentPair pad = pair_sum(pair_zero_prime(p.space, p.ring()), pair_zero(p.space, p.ring()));
  return {"stable taming", pair_sum(p, pad), pair_sum(moved, pad), {}, {}, tame_T_prime(m, p).conj};
}

HomotopyWitness regularized_taming_witness(const IdempotentPair& p, const Morphism& m) {
  IdempotentPair r0 = pair_r0(p.space, p.ring());
  return {"regularized taming", pair_sum({regularize_pair(p), r0, r0}),
          pair_sum({regularize_pair(m.apply(p)), r0, r0}), {}, {}, tame_TR(m, p)};
}

bool inv_stabilization_display(const IdempotentPair& p, const IndexSet& x0, const IndexSet& x1) {
  IdempotentPair lhs = pair_inv(padded(p, {{PadKind::Zero, x0}, {PadKind::One, x1}}));
  IdempotentPair rhs = padded(pair_inv(p), {{PadKind::One, x0}, {PadKind::Zero, x1}});
  return equal(lhs.b, rhs.b) && equal(lhs.a, rhs.a);
}

HomotopyWitness inv_conjugation_witness(const IdempotentPair& p, const Morphism& m) {
  return {"inverse compatibility", pair_inv(p), pair_inv(m.apply(p)), {}, {}, m};
}

bool tensor_stabilization_display(const IdempotentPair& p, const IndexSet& x1, const IndexSet& x0) {
  const Ring& ring = p.ring();
  Matrix e = direct_sum(Matrix::identity(x1, ring), Matrix::zero(x0, x0, ring));
  IdempotentPair lhs = tensor_left(p, IdempotentPair::unchecked(e, e));
  Matrix f = kronecker(Matrix::identity(p.space, ring), e);
  return equal(lhs.b, f) && equal(lhs.a, f);
}

HomotopyWitness tensor_conjugation_witness(const IdempotentPair& p, const IdempotentPair& q, const Morphism& m) {
  Matrix bb = complement(p.b), ab = complement(p.a);
  Morphism conj{kronecker(p.b, m.psi) + kronecker(bb, m.phi), kronecker(p.a, m.psi) + kronecker(ab, m.phi),
                kronecker(p.b, m.psi_inv) + kronecker(bb, m.phi_inv),
                kronecker(p.a, m.psi_inv) + kronecker(ab, m.phi_inv)};
  return {"product compatibility", tensor_left(p, q), tensor_left(p, m.apply(q)), {}, {}, conj};
}

IndexSet ss_space() { return space2(IndexSet::tail_n("n")); }

bool is_single_space(const IdempotentPair& x) {
  if (!x.space.same_layout(ss_space())) return false;
  if (x.a != r0_pattern(IndexSet::tail_n("n"), x.ring()).with_shape(x.space, x.space)) return false;
  return is_valid_pair(x);
}

IdempotentPair ss_zero(const Ring& ring) { return pair_r0(IndexSet::tail_n("n"), ring); }

IdempotentPair ss_one(const Ring& ring) {
  return ss_regularize(pair_one(ring), [](const Pos&) { return 0LL; });
}

namespace {

// Sparse finite matrix on S with rows/cols given as (block, n).
using Sparse = std::map<std::pair<Pos, Pos>, Scalar>;

void place(Sparse& out, const Pos& r, const Pos& c, const Scalar& v) {
  auto [it, fresh] = out.emplace(std::make_pair(r, c), v);
  if (!fresh) it->second += v;
}

IdempotentPair ss_from_blocks(const std::vector<Sparse>& h, const Ring& ring) {
  IndexSet s = ss_space();
  Matrix x = r0_pattern(IndexSet::tail_n("n"), ring).with_shape(s, s);
  for (int blk = 0; blk < 4; ++blk)
    for (const auto& [k, v] : h[blk]) x.add_entry({blk / 2, k.first.pos}, {blk % 2, k.second.pos}, v);
  Matrix base = r0_pattern(IndexSet::tail_n("n"), ring).with_shape(s, s);
  return IdempotentPair::unchecked(x, base);
}

void require_single_space(const IdempotentPair& x) {
  if (!is_single_space(x)) throw GrassError("operand is not a single-space element");
}

}  // namespace

IdempotentPair ss_regularize(const IdempotentPair& p, const std::function<long long(const Pos&)>& theta) {
  Core c = core(p.b, p.a);
  std::vector<Sparse> h(4);
  std::map<Pos, long long> used;
  std::set<long long> images;
  auto image = [&](const Pos& q) {
    auto it = used.find(q);
    if (it != used.end()) return it->second;
    long long t = theta(q);
    if (t < 0 || !images.insert(t).second) throw GrassError("relabeling is not injective on the support");
    used.emplace(q, t);
    return t;
  };
  const Matrix* parts[4] = {&c.h00, &c.h01, &c.h10, &c.h11};
  for (int blk = 0; blk < 4; ++blk) {
    if (!parts[blk]->is_K()) throw GrassError("core is not finitely supported");
    for (const auto& [k, v] : parts[blk]->fin())
      place(h[blk], {0, image(k.row())}, {0, image(k.col())}, v);
  }
  return ss_from_blocks(h, p.ring());
}

long long theta1(int copy, int block, long long n) { return 4 * n + 2 * copy + block; }

long long theta2(int block, long long n) { return 2 * n + block; }

long long theta3(int block1, long long n1, int block2, long long n2) {
  unsigned long long u = 2 * n1 + block1, v = 2 * n2 + block2, out = 0;
  for (int bit = 0; bit < 31; ++bit) {
    out |= ((u >> bit) & 1ULL) << (2 * bit);
    out |= ((v >> bit) & 1ULL) << (2 * bit + 1);
  }
  return static_cast<long long>(out);
}

IdempotentPair ss_add(const IdempotentPair& x, const IdempotentPair& y) {
  require_single_space(x);
  require_single_space(y);
  return ss_regularize(pair_sum(x, y), [](const Pos& q) { return theta1(q.strand / 2, q.strand % 2, q.pos); });
}

IdempotentPair ss_neg(const IdempotentPair& x) {
  require_single_space(x);
  return ss_regularize(pair_inv(x), [](const Pos& q) { return theta2(q.strand, q.pos); });
}

// R theta3_*(x (x<-) y) through the core formula, since S x S has no finite factor.
IdempotentPair ss_mul(const IdempotentPair& x, const IdempotentPair& y) {
  require_single_space(x);
  require_single_space(y);
  if (!x.ring().commutative()) throw GrassError("single-space product needs a commutative ring");
  Core h = core(x.b, x.a), k = core(y.b, y.a);
  IdempotentPair yp = pair_prime(y);
  Core q = core(yp.b, yp.a);
  auto tens = [](Sparse& out, const Matrix& l, const Matrix& r) {
    for (const auto& [lk, lv] : l.fin())
      for (const auto& [rk, rv] : r.fin())
        place(out, {0, theta3(lk.rs, lk.rp, rk.rs, rk.rp)}, {0, theta3(lk.cs, lk.cp, rk.cs, rk.cp)}, lv * rv);
  };
  std::vector<Sparse> out(4);
  tens(out[0], h.h11, q.h11);
  tens(out[0], h.h00, k.h00);
  tens(out[1], h.h11, q.h10);
  tens(out[1], h.h10, q.h10 + q.h11);
  tens(out[1], h.h01, k.h00 + k.h01);
  tens(out[1], h.h00, k.h01);
  tens(out[2], h.h11, q.h01);
  tens(out[2], h.h10, k.h10 + k.h00);
  tens(out[2], h.h01, q.h01 + q.h11);
  tens(out[2], h.h00, k.h10);
  tens(out[3], h.h11, q.h00);
  tens(out[3], h.h00, k.h11);
  return ss_from_blocks(out, x.ring());
}

}  // namespace vgrass
