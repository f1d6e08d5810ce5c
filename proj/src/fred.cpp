// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include "vgrass/fred.hpp"

namespace vgrass {

namespace {

Matrix one_of(const Matrix& a) { return Matrix::identity(a.rows(), a.ring()); }

Matrix scaled(long long k, const Matrix& a) { return a.ring().from_int(k) * a; }

void require(bool ok, const std::string& what) {
  if (!ok) throw FredError(what);
}

bool is_unit_pair(const Matrix& x, const Matrix& x_inv) {
  return equal(x * x_inv, Matrix::identity(x.rows(), x.ring())) &&
         equal(x_inv * x, Matrix::identity(x.cols(), x.ring()));
}

IndexSet two_copies(const IndexSet& omega) { return block_space({"0", "1"}, omega); }

Matrix diag2(const IndexSet& space, const Matrix& x, const Matrix& y) { return block_diag(space, {x, y}); }

}  // namespace

Connector Connector::make(Matrix xi, Matrix xi_inv, Matrix a) {
  require(xi.is_square() && a.is_square() && xi.rows().same_layout(a.rows()), "connector shapes differ");
  require(is_idempotent(a), "connector base is not idempotent");
  require(is_unit_pair(xi, xi_inv), "connector element is not a unit with the given inverse");
  require(approx_equiv(xi * complement(a) * xi_inv, a), "xi (1-a) xi^-1 is not ~ a");
  return {std::move(xi), std::move(xi_inv), std::move(a)};
}

IdempotentPair index_of(const Connector& c) {
  return IdempotentPair(c.xi * complement(c.a) * c.xi_inv, c.a);
}

Connector connector_sum(const Connector& c1, const Connector& c2) {
  return Connector::make(direct_sum(c1.xi, c2.xi), direct_sum(c1.xi_inv, c2.xi_inv), direct_sum(c1.a, c2.a));
}

Connector connector_inv(const Connector& c) { return Connector::make(c.xi, c.xi_inv, complement(c.a)); }

Morphism tensor_index_morphism(const Connector& c1, const Connector& c2) {
  Matrix a = c1.a, ab = complement(a), one = one_of(c2.xi);
  Matrix g = kronecker(a, c2.xi) + kronecker(ab, one);
  Matrix g_inv = kronecker(a, c2.xi_inv) + kronecker(ab, one);
  return Morphism::diagonal(g, g_inv);
}

Connector connector_tensor_left(const Connector& c1, const Connector& c2) {
  Matrix a = c1.a, ab = complement(a), c = c2.a, cb = complement(c), one = one_of(c2.xi);
  Morphism g = tensor_index_morphism(c1, c2);
  Matrix h = kronecker(c1.xi * a, one) + kronecker(c1.xi * ab, c2.xi);
  Matrix h_inv = kronecker(a * c1.xi_inv, one) + kronecker(ab * c1.xi_inv, c2.xi_inv);
  return Connector::make(g.psi_inv * h, h_inv * g.psi, kronecker(a, cb) + kronecker(ab, c));
}

Matrix tilde_correction(const Matrix& xi, const Matrix& eta, const Matrix& a) {
  Matrix ab = complement(a);
  require(equal(xi * a, ab * xi), "xi a = (1-a) xi fails");
  require(approx_equiv(xi * eta, one_of(xi)) && approx_equiv(eta * xi, one_of(xi)), "eta is not a parametrix of xi");
  Matrix outer = a + a * xi * ab - ab;
  // middle factor on the opposite corner; with both nilpotents in the same corner the product is triangular
  Matrix inner = a - ab * eta * a - ab;
  return outer * inner * outer;
}

Matrix swap_replacement(const Matrix& psi, const Matrix& a) {
  IndexSet space = two_copies(a.rows());
  Matrix ab = complement(a), one = one_of(a);
  Matrix w = assemble(space, space, {{ab, a}, {a, ab}});
  return w * diag2(space, psi, one) * w;
}

HomotopyWitness swap_replacement_witness(const Matrix& psi, const Matrix& psi_inv, const Matrix& a) {
  require(is_unit_pair(psi, psi_inv), "psi is not a unit with the given inverse");
  Matrix ab = complement(a);
  require(approx_equiv(psi - ab * psi * ab, a), "psi - (1-a) psi (1-a) is not ~ a");
  IndexSet omega = a.rows(), space = two_copies(omega);
  Matrix one = one_of(a);
  Matrix left = diag2(space, psi_inv, one), left_inv = diag2(space, psi, one);
  Matrix right = swap_replacement(psi_inv, a), right_inv = swap_replacement(psi, a);
  Pad zero{PadKind::Zero, omega};
  return {"swap replacement", IdempotentPair(psi * a * psi_inv, a), pair_trivial(a), {zero}, {zero},
          Morphism::make(left, right, left_inv, right_inv)};
}

HomotopyWitness connector_a1_witness(const Connector& c1, const Connector& c2) {
  require(c1.a == c2.a, "connectors have different base idempotents");
  require(approx_equiv(c1.xi, c2.xi), "connector elements are not ~");
  Matrix one = one_of(c1.a);
  return {"connector a1", index_of(c1), index_of(c2), {}, {},
          Morphism::make(c2.xi * c1.xi_inv, one, c1.xi * c2.xi_inv, one)};
}

std::vector<HomotopyWitness> connector_a2_chain(const Matrix& xi, const Matrix& xi_inv, const Matrix& a1,
                                                const Matrix& a2) {
  require(approx_equiv(a1, a2), "a1 and a2 are not ~");
  Connector c1 = Connector::make(xi, xi_inv, a1), c2 = Connector::make(xi, xi_inv, complement(a2));
  IndexSet space = two_copies(a1.rows());
  IdempotentPair start = reshape(pair_sum(index_of(c1), index_of(c2)), space);
  Matrix s = sw(space, 0, 1, a2);
  Matrix base = regularized_matrix(a1, a2);
  Connector mid = Connector::make(s * diag2(space, xi, xi) * s, s * diag2(space, xi_inv, xi_inv) * s, base);
  Matrix zero = Matrix::zero(a1.rows(), a1.cols(), a1.ring());
  Connector swapped = Connector::make(assemble(space, space, {{zero, xi}, {xi, zero}}),
                                      assemble(space, space, {{zero, xi_inv}, {xi_inv, zero}}), base);
  HomotopyWitness first{"connector a2 switch", start, index_of(mid), {}, {}, Morphism::diagonal(s, s)};
  HomotopyWitness second = connector_a1_witness(mid, swapped);
  second.name = "connector a2 replacement";
  return {first, second};
}

HomotopyWitness connector_square_witness(const Connector& c) {
  require(c.a.rows().is_finite(), "the square witness is built on finite index sets");
  Matrix sq = c.xi * c.xi, sq_inv = c.xi_inv * c.xi_inv, one = one_of(c.a);
  return {"connector square", IdempotentPair(sq * c.a * sq_inv, c.a), pair_trivial(c.a), {}, {},
          Morphism::make(sq_inv, one, sq, one)};
}

FredholmPair FredholmPair::make(Matrix psi, Matrix phi) {
  require(psi.rows().same_layout(phi.cols()) && psi.cols().same_layout(phi.rows()), "psi and phi shapes do not match");
  require(approx_equiv(phi * psi, Matrix::identity(psi.cols(), psi.ring())), "phi psi is not ~ 1");
  require(approx_equiv(psi * phi, Matrix::identity(psi.rows(), psi.ring())), "psi phi is not ~ 1");
  return {std::move(psi), std::move(phi)};
}

Matrix fredholm_F(const FredholmPair& fp) {
  const Ring& r = fp.ring();
  Matrix one0 = Matrix::identity(fp.omega0(), r), one1 = Matrix::identity(fp.omega1(), r);
  Matrix pp = fp.phi * fp.psi;
  IndexSet space = unite(fp.omega0(), fp.omega1());
  return assemble(space, space,
                  {{one0 - pp, scaled(2, fp.phi) - pp * fp.phi}, {fp.psi, fp.psi * fp.phi - one1}});
}

std::vector<Matrix> fredholm_F_factors(const FredholmPair& fp) {
  const Ring& r = fp.ring();
  Matrix one0 = Matrix::identity(fp.omega0(), r), one1 = Matrix::identity(fp.omega1(), r);
  Matrix z01 = Matrix::zero(fp.omega0(), fp.omega1(), r), z10 = Matrix::zero(fp.omega1(), fp.omega0(), r);
  IndexSet space = unite(fp.omega0(), fp.omega1());
  Matrix outer = assemble(space, space, {{one0, fp.phi}, {z10, -one1}});
  Matrix inner = assemble(space, space, {{one0, z01}, {-fp.psi, -one1}});
  return {outer, inner, outer};
}

Matrix fredholm_base(const FredholmPair& fp) {
  const Ring& r = fp.ring();
  return direct_sum(Matrix::zero(fp.omega0(), fp.omega0(), r), Matrix::identity(fp.omega1(), r));
}

Connector connector_F(const FredholmPair& fp) {
  Matrix f = fredholm_F(fp);
  return Connector::make(f, f, fredholm_base(fp));
}

IdempotentPair index_F(const FredholmPair& fp) { return index_of(connector_F(fp)); }

FredholmPair fred_sum(const FredholmPair& f1, const FredholmPair& f2) {
  return FredholmPair::make(direct_sum(f1.psi, f2.psi), direct_sum(f1.phi, f2.phi));
}

FredholmPair fred_inv(const FredholmPair& fp) { return FredholmPair::make(fp.phi, fp.psi); }

FredholmPair fred_compose(const FredholmPair& f2, const FredholmPair& f1) {
  require(f2.omega0().same_layout(f1.omega1()), "composition shapes do not chain");
  return FredholmPair::make(f2.psi * f1.psi, f1.phi * f2.phi);
}

HomotopyWitness unit_composition_witness(const FredholmPair& fp, const Matrix& u, const Matrix& u_inv) {
  require(is_unit_pair(u, u_inv), "u is not a unit with the given inverse");
  FredholmPair composed = fred_compose(FredholmPair::make(u, u_inv), fp);
  Matrix one0 = Matrix::identity(fp.omega0(), fp.ring());
  Matrix g = direct_sum(one0, u), g_inv = direct_sum(one0, u_inv);
  return {"unit composition", index_F(fp), index_F(composed), {}, {}, Morphism::diagonal(g, g_inv)};
}

namespace {

struct TensorSpaces {
  IndexSet o0x0, o1x1, o0x1, o1x0, new0, new1;
};

TensorSpaces tensor_spaces(const FredholmPair& f1, const FredholmPair& f2) {
  TensorSpaces t;
  t.o0x0 = product(f1.omega0(), f2.omega0());
  t.o1x1 = product(f1.omega1(), f2.omega1());
  t.o0x1 = product(f1.omega0(), f2.omega1());
  t.o1x0 = product(f1.omega1(), f2.omega0());
  t.new0 = unite(t.o0x0, t.o1x1);
  t.new1 = unite(t.o0x1, t.o1x0);
  return t;
}

}  // namespace

FredholmPair fred_tensor_left(const FredholmPair& f1, const FredholmPair& f2, TensorVariant variant) {
  const Ring& r = f1.ring();
  const Matrix &psi = f1.psi, &phi = f1.phi, &theta = f2.psi, &chi = f2.phi;
  Matrix one0 = Matrix::identity(f1.omega0(), r), one1 = Matrix::identity(f1.omega1(), r);
  Matrix x0 = Matrix::identity(f2.omega0(), r), x1 = Matrix::identity(f2.omega1(), r);
  TensorSpaces t = tensor_spaces(f1, f2);
  Matrix pp = phi * psi, qq = psi * phi;
  if (variant == TensorVariant::Raw) {
    Matrix off = scaled(2, phi) - pp * phi;
    Matrix big_psi = assemble(t.new1, t.new0,
                              {{kronecker(one0 - pp, theta), kronecker(off, x1)},
                               {kronecker(psi, x0), kronecker(qq - one1, chi)}});
    Matrix big_phi = assemble(t.new0, t.new1,
                              {{kronecker(one0 - pp, chi), kronecker(off, x0)},
                               {kronecker(psi, x1), kronecker(qq - one1, theta)}});
    return FredholmPair::make(big_psi, big_phi);
  }
  Matrix big_psi = assemble(t.new1, t.new0,
                            {{kronecker(one0, theta), kronecker(phi, x1)},
                             {kronecker(-psi, x0), kronecker(one1 - qq, chi)}});
  Matrix big_phi = assemble(t.new0, t.new1,
                            {{kronecker(one0 - pp, chi), kronecker(-phi, x0)},
                             {kronecker(psi, x1), kronecker(one1, theta)}});
  return FredholmPair::make(big_psi, big_phi);
}

Matrix tensor_reduction(const FredholmPair& f1, const FredholmPair& f2) {
  const Ring& r = f1.ring();
  TensorSpaces t = tensor_spaces(f1, f2);
  Matrix one = Matrix::identity(t.o0x1, r), minus = -Matrix::identity(t.o1x0, r);
  return assemble(t.new1, t.new1,
                  {{one, -kronecker(f1.phi, f2.psi)}, {Matrix::zero(t.o1x0, t.o0x1, r), minus}});
}

FredholmPair shift_pair(const Ring& ring) {
  IndexSet n = IndexSet::tail_n("n");
  return FredholmPair::make(Matrix::shift(n, n, ring, 0, 0, -1), Matrix::shift(n, n, ring, 0, 0, 1));
}

}  // namespace vgrass
