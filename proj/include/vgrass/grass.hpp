// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vgrass/mat.hpp"

namespace vgrass {

class GrassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// <b, a>: leading term b, base term a, both idempotent with b - a finitely supported.
struct IdempotentPair {
  IndexSet space;
  Matrix b, a;

  IdempotentPair() = default;
  // Validates the invariants.
  IdempotentPair(Matrix b, Matrix a);
  static IdempotentPair unchecked(Matrix b, Matrix a);

  const Ring& ring() const { return b.ring(); }
  bool operator==(const IdempotentPair& o) const { return b == o.b && a == o.a; }
};

bool is_valid_pair(const IdempotentPair& p);

// 0_X = <0,0>, 0'_X = <1,1>, 1 = <1,0> on one point, <a,a>, and the pair on the empty set.
IdempotentPair pair_zero(const IndexSet& x, const Ring& ring);
IdempotentPair pair_zero_prime(const IndexSet& x, const Ring& ring);
IdempotentPair pair_one(const Ring& ring);
IdempotentPair pair_trivial(const Matrix& a);
IdempotentPair pair_empty(const Ring& ring);

IdempotentPair pair_sum(const IdempotentPair& p, const IdempotentPair& q);
IdempotentPair pair_sum(const std::vector<IdempotentPair>& parts);
IdempotentPair pair_inv(const IdempotentPair& p);        // <1-b, 1-a>
IdempotentPair pair_inv_prime(const IdempotentPair& p);  // <a, b>
IdempotentPair pair_prime(const IdempotentPair& p);      // <1-a, 1-b>
IdempotentPair tensor_left(const IdempotentPair& p, const IdempotentPair& q);
IdempotentPair tensor_right(const IdempotentPair& p, const IdempotentPair& q);
// Same matrices over layout-identical spaces.
IdempotentPair reshape(const IdempotentPair& p, const IndexSet& space);
IdempotentPair push_forward(const Relabeling& r, const IdempotentPair& p);

// trace(b - a)
Scalar chi(const IdempotentPair& p);

// <psi, phi> with stored inverses; maps <b,a> to <psi b psi^-1, phi a phi^-1>.
struct Morphism {
  Matrix psi, phi, psi_inv, phi_inv;

  static Morphism make(Matrix psi, Matrix phi, Matrix psi_inv, Matrix phi_inv);
  // <g, g>
  static Morphism diagonal(Matrix g, Matrix g_inv);
  static Morphism identity(const IndexSet& set, const Ring& ring);

  const IndexSet& target() const { return psi.rows(); }
  const IndexSet& source() const { return psi.cols(); }
  Morphism inverse() const { return {psi_inv, phi_inv, psi, phi}; }
  IdempotentPair apply(const IdempotentPair& p) const;
};

// Units with correct inverses and psi ~ phi; empty string when valid.
std::string morphism_defect(const Morphism& m);
// g after f
Morphism compose(const Morphism& g, const Morphism& f);
Morphism compose(const std::vector<Morphism>& chain);  // chain[0] applied first
Morphism direct_sum(const Morphism& f, const Morphism& g);
Morphism direct_sum(const std::vector<Morphism>& parts);

// The 0/1 unit moving whole parts: target part j is source part order[j].
Matrix part_permutation(const std::vector<IndexSet>& parts, const std::vector<int>& order, const Ring& ring);
Morphism permutation_morphism(const std::vector<IndexSet>& parts, const std::vector<int>& order, const Ring& ring);

enum class PadKind { Zero, One };
struct Pad {
  PadKind kind;
  IndexSet set;
};
IdempotentPair padded(const IdempotentPair& p, const std::vector<Pad>& pads);

// lhs + pads_lhs is carried to rhs + pads_rhs by conj.
struct HomotopyWitness {
  std::string name;
  IdempotentPair lhs, rhs;
  std::vector<Pad> pads_lhs, pads_rhs;
  Morphism conj;
};

// Empty when the witness verifies exactly, otherwise the first failing check.
std::string witness_failure(const HomotopyWitness& w);
bool verify_witness(const HomotopyWitness& w);

// Block index set {labels} x omega.
IndexSet block_space(const std::vector<std::string>& labels, const IndexSet& omega);
// Block-diagonal matrix over block_space(.., omega).
Matrix block_diag(const IndexSet& space, const std::vector<Matrix>& diag);
// Partial switch between block positions n and m of space = {labels} x omega, through a on omega.
Matrix sw(const IndexSet& space, int n, int m, const Matrix& a);

// sw01(a) (b + 1-a) sw01(a) on {0,1} x omega.
Matrix regularized_matrix(const Matrix& b, const Matrix& a);
IdempotentPair regularize_pair(const IdempotentPair& p);
// Base of R<a,a>: 0 + 1 on {0,1} x omega.
Matrix r0_pattern(const IndexSet& omega, const Ring& ring);
IdempotentPair pair_r0(const IndexSet& omega, const Ring& ring);
// R(<psi,phi>, a) with base phi + phi.
Morphism regularize_morphism(const Morphism& m, const Matrix& a);
// <b,a> + <1-a,1-a> -> R<b,a>
HomotopyWitness regularization_witness(const IdempotentPair& p);

// <H, 1> on {0,0',0''} x omega.
Morphism translation_H(const IdempotentPair& p);
// <HR, 1> on {0,1,0',1',0'',1''} x omega.
Morphism translation_HR(const IdempotentPair& p);

struct Tamed {
  Morphism conj;
  bool commutes = true;  // phi a = a phi; the conjugation identity is asserted only then
};
Tamed tame_T(const Morphism& m, const IdempotentPair& p);
Tamed tame_T_prime(const Morphism& m, const IdempotentPair& p);
Morphism tame_TR(const Morphism& m, const IdempotentPair& p);

// The cancellation unit for an idempotent a on a finite omega.
struct CancelB {
  // Z x omega half-integer form: rows j stand for j + 1/2.
  Matrix bz, bz_inv;
  // Split form: (Z^- u {0} u Z^+) x omega -> (-1/2-N u 1/2+N) x omega.
  Morphism split;
  // 1 + a + 0 on the source and 1 + 0 on the target.
  Matrix step_source, step_target;
};
CancelB cancel_B(const Matrix& a);
// N x omega, the pad set used by cancellation.
IndexSet cancellation_pad(const IndexSet& omega);
// <e,e> + 0'_P + 0_P -> 0'_P + 0_P, P = N x omega.
HomotopyWitness cancellation_witness(const Matrix& e);

// Commutativity conjugator on {0,1,0',1'} x (omega x xi).
Morphism comm_C(const IdempotentPair& p, const IdempotentPair& q);
HomotopyWitness comm_witness(const IdempotentPair& p, const IdempotentPair& q);

// p + inv p -> 0_omega + 0'_omega
HomotopyWitness additive_inverse_witness(const IdempotentPair& p);
// R<a,b> -> R<a,b>' by <sw01(a) sw01(b), 1>
HomotopyWitness inv_prime_witness(const IdempotentPair& p);
// <b,a> -> <b,a>' using the cancellation pads.
HomotopyWitness prime_witness(const IdempotentPair& p);
// Step chain for <b,b'> ~ <b,a> + inv<b',a>.
std::vector<HomotopyWitness> diff_decomposition(const Matrix& b, const Matrix& b_prime, const Matrix& a);

// Conjugation witnesses for the regularization and taming constructions.
HomotopyWitness r_morphism_witness(const IdempotentPair& p, const Morphism& m);
HomotopyWitness translation_witness(const IdempotentPair& p);
HomotopyWitness regularized_translation_witness(const IdempotentPair& p);
// m must carry <b,a> to <b~,a>.
HomotopyWitness stable_taming_witness(const IdempotentPair& p, const Morphism& m);
HomotopyWitness regularized_taming_witness(const IdempotentPair& p, const Morphism& m);

// Compatibility identities.
// (p + 0_x0 + 0'_x1)^inv equals inv p + 0'_x0 + 0_x1.
bool inv_stabilization_display(const IdempotentPair& p, const IndexSet& x0, const IndexSet& x1);
// inv p -> inv (m p) by the same morphism.
HomotopyWitness inv_conjugation_witness(const IdempotentPair& p, const Morphism& m);
// p (x<-) <1 + 0, 1 + 0> equals <1 + 0, 1 + 0> on omega x (x1 u x0).
bool tensor_stabilization_display(const IdempotentPair& p, const IndexSet& x1, const IndexSet& x0);
// p (x<-) q -> p (x<-) (m q) by <b(x)theta + (1-b)(x)chi, a(x)theta + (1-a)(x)chi>.
HomotopyWitness tensor_conjugation_witness(const IdempotentPair& p, const IdempotentPair& q, const Morphism& m);

// Single-space elements: <X, 0+1> on S = {0,1} x N with X ~ 0+1.
IndexSet ss_space();
bool is_single_space(const IdempotentPair& x);
IdempotentPair ss_zero(const Ring& ring);
IdempotentPair ss_one(const Ring& ring);
IdempotentPair ss_add(const IdempotentPair& x, const IdempotentPair& y);
IdempotentPair ss_neg(const IdempotentPair& x);
IdempotentPair ss_mul(const IdempotentPair& x, const IdempotentPair& y);
// R theta_* p on S for theta injective on the support of b - a (finite transport of the core).
IdempotentPair ss_regularize(const IdempotentPair& p, const std::function<long long(const Pos&)>& theta);
// The canonical relabelings into N.
long long theta1(int copy, int block, long long n);
long long theta2(int block, long long n);
long long theta3(int block1, long long n1, int block2, long long n2);

}  // namespace vgrass
