// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>
#include <utility>

#include "vgrass/mat.hpp"

namespace vgrass {

using Rng = std::mt19937_64;

// Small random rational (or integer for Integers) in the given ring.
Scalar random_scalar(Rng& rng, const Ring& ring, int range = 3);

// g = L U with unit triangular L, U having entries in {-2..2}; returns (g, g^-1).
// Over MatrixRing(Q,n) the scalar matrix is drawn over Q and cut into n x n blocks.
std::pair<Matrix, Matrix> random_unit(Rng& rng, const IndexSet& omega, const Ring& ring);
// g D g^-1 with D a random 0/1 diagonal.
Matrix random_idempotent(Rng& rng, const IndexSet& omega, const Ring& ring);
// g K g^-1 with K diagonal with nonzero entries: an invertible element commuting with a.
struct CommutingUnit {
  Matrix a, phi, phi_inv;
};
CommutingUnit random_commuting(Rng& rng, const IndexSet& omega, const Ring& ring);
// Units and idempotents that differ from a diagonal only on the first `width` positions of each
// tail (and on the points); they work over infinite index sets.
std::pair<Matrix, Matrix> random_local_unit(Rng& rng, const IndexSet& omega, const Ring& ring, long long width = 2);
Matrix random_local_idempotent(Rng& rng, const IndexSet& omega, const Ring& ring, long long width = 2);
// Finitely supported random matrix with roughly `density` of the window filled.
Matrix random_finite(Rng& rng, const IndexSet& rows, const IndexSet& cols, const Ring& ring, long long radius,
                     double density = 0.3);
// Random Toeplitz-plus-finite matrix: symbols of bandwidth <= bw on tail blocks, finite part within radius.
Matrix random_structured(Rng& rng, const IndexSet& rows, const IndexSet& cols, const Ring& ring, long long bw,
                         long long radius);

}  // namespace vgrass
