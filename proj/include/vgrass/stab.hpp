// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <vector>

#include "vgrass/grass.hpp"

namespace vgrass {

class StabError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// s = cos(theta), t = sin(theta) with s^2 + t^2 = 1 in the ring.
struct TrigAngle {
  Ring ring;
  Scalar s, t;

  static TrigAngle symbolic();  // the generators of the trig quotient ring
  static TrigAngle numeric(double theta, double tolerance = 1e-9);
  static TrigAngle exact(const Ring& ring, Scalar s, Scalar t);
  static TrigAngle zero(const Ring& ring);     // theta = 0
  static TrigAngle quarter(const Ring& ring);  // theta = pi/2
  TrigAngle negated() const { return {ring, s, -t}; }
};

// The stabilization operator on N: column j is t^j s e_0 + sum_{1<=i<=j} t^(j-i) s^2 e_i - t e_(j+1).
ColumnFiniteOperator cstab(const TrigAngle& angle);
// J C J with J = diag((-1)^n); at theta = pi/2 it is exactly the shift e_j -> e_(j+1).
ColumnFiniteOperator cstab_signed(const TrigAngle& angle);
// C D for column-finite operators on N.
ColumnFiniteOperator compose(const ColumnFiniteOperator& c, const ColumnFiniteOperator& d);

// Finite combination of wedges e_i1 ^ ... ^ e_ik, stored with i1 < ... < ik.
using Wedge = std::vector<long long>;
struct WedgeVector {
  Ring ring;
  std::map<Wedge, Scalar> terms;

  // v e_i1 ^ ... ^ e_ik for any index order; repeated indices give zero.
  static WedgeVector basis(const Ring& ring, const Wedge& indices, const Scalar& v);
  void add(const Wedge& sorted, const Scalar& v);
  bool operator==(const WedgeVector& o) const;
};

WedgeVector qu1_apply(const ColumnFiniteOperator& c, const WedgeVector& w);
// e_i1 ^ ... ^ e_ik -> e_(2^i1 + ... + 2^ik)
std::map<long long, Scalar> v_map(const WedgeVector& w);
long long v_code(const Wedge& w);
Wedge v_index(long long n);
// V Qu1(c) V^-1 as a column-finite operator on N.
ColumnFiniteOperator quantize(const ColumnFiniteOperator& c);

// hv(n) = 2n pushed forward on a finitely supported matrix over N.
Matrix hv_conjugation(const Matrix& a);
// V Qu1 T_K(a, theta) built on the signed operator: the identity at 0 and hv_* at pi/2.
Matrix hv_homotopy(const Matrix& a, const TrigAngle& angle);

// Path from b to b (+~) R0 for a single-space idempotent b on {0,1} x N with b - (0 + 1) finite.
struct Stabilized {
  Matrix start, endpoint;
  std::function<Matrix(const TrigAngle&)> value;
};
Stabilized stabilize_idempotent(const Matrix& b);

// N u (2N u 2N+1): the space on which the room rotation acts.
IndexSet room_space();
// [[cos, -hv^T sin], [hv sin, 1_2N cos + 1_2N+1]]
Matrix room_rotation(const TrigAngle& angle);
// U(alpha) (phi + 1) U(-alpha) with its inverse; phi acts on the first N.
Morphism make_room(const Matrix& phi, const Matrix& phi_inv, const TrigAngle& angle);

// Entries of a over Z or Q carried into another ring.
Matrix lift_matrix(const Matrix& a, const Ring& ring);

}  // namespace vgrass
