// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include "vgrass/grass.hpp"

namespace vgrass {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integers "n", rationals "p/q" (or "n"), trig {"c": [[i, q]...], "ct": [...]}, floats as doubles,
// matrix-ring elements as {"n": k, "e": [row-major scalars]}.
Json scalar_to_json(const Scalar& x);
Scalar scalar_from_json(const Json& j, const Ring& ring);

// "Z" | "Q" | "trig" | {"float": tol} | {"matrix": k, "base": ring}
Json ring_to_json(const Ring& r);
Ring ring_from_json(const Json& j);
// Command-line spelling: Z, Q, trig, float[:tol].
Ring ring_from_name(const std::string& name);

// {"finite": [labels]} | {"tailN": tag} | {"tailZ": tag} | {"union": [l, r]} | {"product": [l, r]}
Json shape_to_json(const IndexSet& s);
IndexSet shape_from_json(const Json& j);

// Index paths: a position is a number, ["L", i] / ["R", i] pick a union side, [i, j] a product pair.
Json index_to_json(const Index& i);
Index index_from_json(const Json& j);

// Symbols are addressed by strand number ("rt", "ct"); tags repeat across product copies.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json pair_to_json(const IdempotentPair& p);
IdempotentPair pair_from_json(const Json& j);
Json morphism_to_json(const Morphism& m);
Morphism morphism_from_json(const Json& j);
Json witness_to_json(const HomotopyWitness& w);
HomotopyWitness witness_from_json(const Json& j);

Json read_json_file(const std::string& path);

}  // namespace vgrass
