// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "vgrass/grass.hpp"

namespace vgrass {

class AnalyticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Entries carried into the float ring (integer, rational or float input).
Matrix to_float(const Matrix& a, double tolerance = 1e-9);
// Operator 2-norm on the finite window of the matrix (support plus a margin of 4 on every tail).
// Tails may only carry constant diagonal symbols.
double window_norm(const Matrix& a);
// ||x p x^-1 - q|| with x^-1 solved on the window.
double conjugation_residual(const Matrix& x, const Matrix& p, const Matrix& q);
// Inverse on the window; fails when the window determinant vanishes.
Matrix window_inverse(const Matrix& x);

struct IdempotentPath {
  std::function<Matrix(double)> sample;
  std::function<Matrix(double)> derivative;  // central differences when empty
  double step = 1e-3;
};

// Fourth-order integration of X' = (P'P - PP') X, X(t1) = 1.
Matrix transport(const IdempotentPath& path, double t1, double t2);
// P(t) = R(omega t) diag(1, 0) R(omega t)^T on two points, with its exact derivative.
IdempotentPath rotation_path(double omega, double step);

struct NearIdempotent {
  Matrix p_tilde, reference;  // reference is an exact idempotent close to p_tilde
  double defect = 0;          // ||p~^2 - p~||

  static NearIdempotent make(const Matrix& p_tilde, const Matrix& reference);
};

enum class IdemMethod { Newton, Series };
inline constexpr double kMaxIdemDefect = 0.05;
// Newton: p <- 3p^2 - 2p^3. Series: the residue expansion around the reference to the given order.
Matrix idem(const NearIdempotent& x, IdemMethod method, int order = 8);

// Exact over any ring: 1 - P - Q and 1 - P - Q + 2QP.
Matrix connector_plain(const Matrix& p, const Matrix& q);
Matrix connector_corrected(const Matrix& p, const Matrix& q);
// sgn(1 - P - Q) as the constant Laurent coefficient of ((1-P)+(1-Q) - (P+Q)z) / ((1-P)+(1-Q) + (P+Q)z).
Matrix sign_connector(const Matrix& p, const Matrix& q);

enum class ConnectForm { Plain, Corrected, Sign };
// <C, C> with C P C^-1 = Q; the inverse is solved (plain), factored (corrected) or C itself (sign).
Morphism connect(const Matrix& p, const Matrix& q, ConnectForm form);

struct Reduction {
  Matrix p_eps;     // finite idempotent close to P
  Morphism conj;    // <1 - P - P_eps + 2 P_eps P, 1>
  long long dropped = 0;  // entries moved into epsilon
  long long support_radius = 0;
  double bound = 0;       // ||P eps|| + ||(1-P) eps||
  double residual = 0;    // conjugation residual
};
// Drops the entries of P - pattern below the cutoff, re-idempotents and connects.
Reduction finite_reduce(const Matrix& p, const Matrix& pattern, double cutoff);

}  // namespace vgrass
