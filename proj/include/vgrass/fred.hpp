// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "vgrass/grass.hpp"

namespace vgrass {

class FredError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// [xi, a>: a unit xi (inverse stored) and an idempotent a with xi (1-a) xi^-1 ~ a.
struct Connector {
  Matrix xi, xi_inv, a;

  static Connector make(Matrix xi, Matrix xi_inv, Matrix a);
};

// <xi (1-a) xi^-1, a>
IdempotentPair index_of(const Connector& c);
Connector connector_sum(const Connector& c1, const Connector& c2);
// [xi, 1-a>
Connector connector_inv(const Connector& c);
// [(a(x)s + a'(x)1)^-1 (xi a (x) 1 + xi a' (x) s), a(x)c' + a'(x)c> with a' = 1-a, c' = 1-c.
Connector connector_tensor_left(const Connector& c1, const Connector& c2);
// <a(x)s + a'(x)1, same>: carries Ind(c1 (x<-) c2) to Ind c1 (x<-) Ind c2.
Morphism tensor_index_morphism(const Connector& c1, const Connector& c2);

// (a + a xi a' - a')(a - a' eta a - a')(a + a xi a' - a'); needs xi a = a' xi. Equals xi if xi is an involution.
Matrix tilde_correction(const Matrix& xi, const Matrix& eta, const Matrix& a);
// [[a' psi a' + a, a' psi a], [a psi a', a' + a psi a]] = W (psi + 1) W with W = [[a', a], [a, a']].
Matrix swap_replacement(const Matrix& psi, const Matrix& a);
// <psi a psi^-1, a> + 0 -> <a, a> + 0 by <psi^-1 + 1, W (psi^-1 + 1) W>; needs psi - a' psi a' ~ a.
HomotopyWitness swap_replacement_witness(const Matrix& psi, const Matrix& psi_inv, const Matrix& a);
// Ind[xi1, a> -> Ind[xi2, a> by <xi2 xi1^-1, 1>; needs xi1 ~ xi2.
HomotopyWitness connector_a1_witness(const Connector& c1, const Connector& c2);
// Ind[xi,a1> + Ind[xi,1-a2> -> Ind[sw01(a2)(xi + xi)sw01(a2), R<a1,a2>> -> Ind[[[0,xi],[xi,0]], R<a1,a2>>.
std::vector<HomotopyWitness> connector_a2_chain(const Matrix& xi, const Matrix& xi_inv, const Matrix& a1,
                                                const Matrix& a2);
// <xi^2 a xi^-2, a> -> <a, a> by <xi^-2, 1>; finite index sets only.
HomotopyWitness connector_square_witness(const Connector& c);

// psi: Omega0 -> Omega1 (rows Omega1) with parametrix phi, phi psi ~ 1 and psi phi ~ 1.
struct FredholmPair {
  Matrix psi, phi;

  static FredholmPair make(Matrix psi, Matrix phi);
  const IndexSet& omega0() const { return psi.cols(); }
  const IndexSet& omega1() const { return psi.rows(); }
  const Ring& ring() const { return psi.ring(); }
};

// [[1 - phi psi, 2 phi - phi psi phi], [psi, psi phi - 1]] on Omega0 u Omega1.
Matrix fredholm_F(const FredholmPair& fp);
// The three involutions whose product is F.
std::vector<Matrix> fredholm_F_factors(const FredholmPair& fp);
// 0 + 1 on Omega0 u Omega1
Matrix fredholm_base(const FredholmPair& fp);
Connector connector_F(const FredholmPair& fp);
IdempotentPair index_F(const FredholmPair& fp);

FredholmPair fred_sum(const FredholmPair& f1, const FredholmPair& f2);
FredholmPair fred_inv(const FredholmPair& fp);  // (phi, psi)
// (psi2 psi1, phi1 phi2)
FredholmPair fred_compose(const FredholmPair& f2, const FredholmPair& f1);
// Ind_F(psi,phi) -> Ind_F((u,u^-1) o (psi,phi)) by <1 + u, 1 + u>.
HomotopyWitness unit_composition_witness(const FredholmPair& fp, const Matrix& u, const Matrix& u_inv);

enum class TensorVariant { Raw, Reduced };
// Omega0' = Omega0 x Xi0 u Omega1 x Xi1, Omega1' = Omega0 x Xi1 u Omega1 x Xi0.
FredholmPair fred_tensor_left(const FredholmPair& f1, const FredholmPair& f2, TensorVariant variant);
// [[1, -phi (x) theta], [0, -1]] on Omega1'; an involution.
Matrix tensor_reduction(const FredholmPair& f1, const FredholmPair& f2);

// psi = z^-1 on N (psi e_(n+1) = e_n, psi e_0 = 0) with phi = z; chi(Ind_F) = +1.
FredholmPair shift_pair(const Ring& ring);

}  // namespace vgrass
