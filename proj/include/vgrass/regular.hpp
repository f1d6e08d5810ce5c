// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "vgrass/grass.hpp"

namespace vgrass {

class RegularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// h_ij = a^[i] (b - a) a^[j] with a^[0] = 1 - a, a^[1] = a.
struct CoreInfo {
  IndexSet omega;
  Matrix h00, h01, h10, h11;
};

// H = [[h00, h01], [h10, 1 + h11]] on {0,1} x omega.
struct RegularIdempotent {
  IndexSet omega;
  Matrix h;

  const IndexSet& space() const { return h.rows(); }
  const Ring& ring() const { return h.ring(); }
  bool operator==(const RegularIdempotent& o) const { return h == o.h; }
};

CoreInfo h_components(const IdempotentPair& p);
CoreInfo core_of(const RegularIdempotent& u);
// Names of the failing idempotency identities (first four) and regularity identities (last eight).
std::vector<std::string> idempotency_violations(const CoreInfo& c);
std::vector<std::string> regularity_violations(const CoreInfo& c);
bool is_regular(const RegularIdempotent& u);
// Rejects cores that violate any of the twelve identities.
RegularIdempotent assemble_core(const CoreInfo& c);
RegularIdempotent regular_of(const IdempotentPair& p);  // assemble(h_components(p))
IdempotentPair as_pair(const RegularIdempotent& u);     // <H, 0 + 1>

RegularIdempotent regular_sum(const RegularIdempotent& u, const RegularIdempotent& v);
RegularIdempotent regular_inv(const RegularIdempotent& u);
RegularIdempotent regular_prime(const RegularIdempotent& u);
RegularIdempotent regular_tensor_left(const RegularIdempotent& u, const RegularIdempotent& v);
RegularIdempotent regular_tensor_right(const RegularIdempotent& u, const RegularIdempotent& v);

struct DimCertificate {
  long long dim = 0;
  std::vector<Pos> kept;  // base indices of omega that survive trimming
  RegularIdempotent trimmed;
  // p + <1-a,1-a> -> R p, then R p -> <U, R0> + 0 + 0' on the trimmed-away indices.
  std::vector<HomotopyWitness> chain;
};

// Upper bound for the regular dimension; omega must consist of points and N-tails.
DimCertificate dim_upper(const IdempotentPair& p);
bool verify_certificate(const IdempotentPair& p, const DimCertificate& c);

}  // namespace vgrass
