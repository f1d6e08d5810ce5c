// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include "vgrass/regular.hpp"

#include <map>
#include <set>

namespace vgrass {

namespace {

IndexSet two_blocks(const IndexSet& omega) { return block_space({"0", "1"}, omega); }

RegularIdempotent assemble_unchecked(const CoreInfo& c) {
  Matrix one = Matrix::identity(c.omega, c.h00.ring());
  IndexSet space = two_blocks(c.omega);
  return {c.omega, assemble(space, space, {{c.h00, c.h01}, {c.h10, one + c.h11}})};
}

void require_regular(const RegularIdempotent& u) {
  if (!is_regular(u)) throw RegularError("operand is not a regular idempotent");
}

CoreInfo core_with(const IndexSet& omega, Matrix h00, Matrix h01, Matrix h10, Matrix h11) {
  return {omega, std::move(h00), std::move(h01), std::move(h10), std::move(h11)};
}

}  // namespace

CoreInfo h_components(const IdempotentPair& p) {
  Matrix d = p.b - p.a, ab = complement(p.a);
  return {p.space, ab * d * ab, ab * d * p.a, p.a * d * ab, p.a * d * p.a};
}

CoreInfo core_of(const RegularIdempotent& u) {
  const IndexSet& om = u.omega;
  int k = om.strand_count();
  return {om, extract(u.h, 0, 0, om, om), extract(u.h, 0, k, om, om), extract(u.h, k, 0, om, om),
          extract(u.h, k, k, om, om) - Matrix::identity(om, u.ring())};
}

std::vector<std::string> idempotency_violations(const CoreInfo& c) {
  std::vector<std::string> out;
  auto zero = Matrix::zero(c.omega, c.omega, c.h00.ring());
  if (!equal(c.h00 * c.h00 + c.h01 * c.h10, c.h00)) out.push_back("h00 h00 + h01 h10 = h00");
  if (!equal(c.h00 * c.h01 + c.h01 * c.h11, zero)) out.push_back("h00 h01 + h01 h11 = 0");
  if (!equal(c.h10 * c.h00 + c.h11 * c.h10, zero)) out.push_back("h10 h00 + h11 h10 = 0");
  if (!equal(c.h10 * c.h01 + c.h11 * c.h11, -c.h11)) out.push_back("h10 h01 + h11 h11 = -h11");
  return out;
}

std::vector<std::string> regularity_violations(const CoreInfo& c) {
  std::vector<std::string> out;
  auto zero = Matrix::zero(c.omega, c.omega, c.h00.ring());
  const std::pair<const Matrix*, const Matrix*> terms[] = {{&c.h00, &c.h10}, {&c.h01, &c.h00}, {&c.h00, &c.h11},
                                                           {&c.h01, &c.h01}, {&c.h10, &c.h10}, {&c.h11, &c.h00},
                                                           {&c.h10, &c.h11}, {&c.h11, &c.h01}};
  const char* names[] = {"h00 h10 = 0", "h01 h00 = 0", "h00 h11 = 0", "h01 h01 = 0",
                         "h10 h10 = 0", "h11 h00 = 0", "h10 h11 = 0", "h11 h01 = 0"};
  for (int i = 0; i < 8; ++i)
    if (!equal(*terms[i].first * *terms[i].second, zero)) out.push_back(names[i]);
  return out;
}

bool is_regular(const RegularIdempotent& u) {
  CoreInfo c = core_of(u);
  for (const Matrix* h : {&c.h00, &c.h01, &c.h10, &c.h11})
    if (!h->is_K()) return false;
  return idempotency_violations(c).empty() && regularity_violations(c).empty();
}

RegularIdempotent assemble_core(const CoreInfo& c) {
  for (const Matrix* h : {&c.h00, &c.h01, &c.h10, &c.h11})
    if (!h->is_K()) throw RegularError("core components must be finitely supported");
  auto bad = idempotency_violations(c);
  if (!bad.empty()) throw RegularError("core is not idempotent: " + bad.front());
  bad = regularity_violations(c);
  if (!bad.empty()) throw RegularError("core is not regular: " + bad.front());
  return assemble_unchecked(c);
}

RegularIdempotent regular_of(const IdempotentPair& p) { return assemble_core(h_components(p)); }

IdempotentPair as_pair(const RegularIdempotent& u) {
  return IdempotentPair::unchecked(u.h, r0_pattern(u.omega, u.ring()).with_shape(u.space(), u.space()));
}

RegularIdempotent regular_sum(const RegularIdempotent& u, const RegularIdempotent& v) {
  require_regular(u);
  require_regular(v);
  CoreInfo h = core_of(u), k = core_of(v);
  IndexSet om = unite(u.omega, v.omega);
  return assemble_core(core_with(om, direct_sum(h.h00, k.h00), direct_sum(h.h01, k.h01), direct_sum(h.h10, k.h10),
                                 direct_sum(h.h11, k.h11)));
}

RegularIdempotent regular_inv(const RegularIdempotent& u) {
  require_regular(u);
  CoreInfo h = core_of(u);
  return assemble_core(core_with(u.omega, -h.h11, -h.h10, -h.h01, -h.h00));
}

RegularIdempotent regular_prime(const RegularIdempotent& u) {
  require_regular(u);
  CoreInfo h = core_of(u);
  IndexSet space = u.space();
  Matrix left = sw(space, 0, 1, h.h00 - h.h01 + h.h10 - h.h11);
  Matrix right = sw(space, 0, 1, h.h00 + h.h01 - h.h10 - h.h11);
  return assemble_core(core_of({u.omega, left * u.h * right}));
}

RegularIdempotent regular_tensor_left(const RegularIdempotent& u, const RegularIdempotent& v) {
  require_regular(u);
  require_regular(v);
  if (!u.ring().commutative()) throw RegularError("regular products need a commutative ring");
  CoreInfo h = core_of(u), k = core_of(v), q = core_of(regular_prime(v));
  IndexSet om = product(u.omega, v.omega);
  auto x = [](const Matrix& l, const Matrix& r) { return kronecker(l, r); };
  return assemble_core(core_with(
      om, x(h.h11, q.h11) + x(h.h00, k.h00),
      x(h.h11, q.h10) + x(h.h10, q.h10 + q.h11) + x(h.h01, k.h00 + k.h01) + x(h.h00, k.h01),
      x(h.h11, q.h01) + x(h.h10, k.h10 + k.h00) + x(h.h01, q.h01 + q.h11) + x(h.h00, k.h10),
      x(h.h11, q.h00) + x(h.h00, k.h11)));
}

// The left formula with the roles of the factors exchanged.
RegularIdempotent regular_tensor_right(const RegularIdempotent& u, const RegularIdempotent& v) {
  require_regular(u);
  require_regular(v);
  if (!u.ring().commutative()) throw RegularError("regular products need a commutative ring");
  CoreInfo h = core_of(u), q = core_of(regular_prime(u)), k = core_of(v);
  IndexSet om = product(u.omega, v.omega);
  auto x = [](const Matrix& l, const Matrix& r) { return kronecker(l, r); };
  return assemble_core(core_with(
      om, x(q.h11, k.h11) + x(h.h00, k.h00),
      x(q.h10, k.h11) + x(q.h10 + q.h11, k.h10) + x(h.h00 + h.h01, k.h01) + x(h.h01, k.h00),
      x(q.h01, k.h11) + x(h.h10 + h.h00, k.h10) + x(q.h01 + q.h11, k.h01) + x(h.h10, k.h00),
      x(q.h00, k.h11) + x(h.h11, k.h00)));
}

DimCertificate dim_upper(const IdempotentPair& p) {
  const IndexSet& omega = p.space;
  const Ring& ring = p.ring();
  for (const auto& s : omega.strands())
    if (s.kind == StrandKind::TailZ) throw RegularError("dimension estimate needs points and N-tails only");
  CoreInfo c = h_components(p);
  std::set<Pos> support;
  for (const Matrix* h : {&c.h00, &c.h01, &c.h10, &c.h11})
    for (const auto& [key, v] : h->fin()) {
      if (ring.near_zero(v)) continue;
      support.insert(key.row());
      support.insert(key.col());
    }

  DimCertificate cert;
  cert.kept.assign(support.begin(), support.end());
  cert.dim = static_cast<long long>(cert.kept.size());
  IndexSet xi = IndexSet::range(static_cast<int>(cert.kept.size()));

  // The complement of the kept indices: skipped points, and every N-tail past its last kept position.
  std::vector<IndexSet> parts;
  std::vector<Relabeling::Image> rest;
  for (int s = 0; s < omega.strand_count(); ++s) {
    if (!omega.is_tail(s)) {
      if (!support.count({s, 0})) {
        parts.push_back(IndexSet::range(1));
        rest.push_back({s, 0});
      }
      continue;
    }
    long long start = 0;
    for (const auto& q : cert.kept)
      if (q.strand == s) start = std::max(start, q.pos + 1);
    for (long long n = 0; n < start; ++n)
      if (!support.count({s, n})) {
        parts.push_back(IndexSet::range(1));
        rest.push_back({s, n});
      }
    parts.push_back(IndexSet::tail_n(omega.strands()[s].tag));
    rest.push_back({s, start});
  }
  IndexSet comp = parts.empty() ? IndexSet() : unite(parts);

  IndexSet big = two_blocks(omega), small = two_blocks(xi);
  int n_om = omega.strand_count();
  std::vector<Relabeling::Image> img;
  for (int blk = 0; blk < 2; ++blk)
    for (const auto& q : cert.kept) img.push_back({blk * n_om + q.strand, q.pos});
  for (int blk = 0; blk < 2; ++blk)
    for (const auto& im : rest) img.push_back({blk * n_om + im.strand, im.offset});
  IndexSet src = unite({small, comp, comp});
  Relabeling r = Relabeling::from_images(Relabeling::Kind::FiniteMap, src, big, img);
  Matrix pm = relabel_matrix(r, ring);

  IdempotentPair rp = regularize_pair(p);
  Matrix u = pm.transpose() * rp.b * pm;
  Matrix trimmed = extract(u, 0, 0, small, small);
  cert.trimmed = {xi, trimmed};
  IdempotentPair rhs = IdempotentPair::unchecked(trimmed, r0_pattern(xi, ring).with_shape(small, small));
  cert.chain.push_back(regularization_witness(p));
  cert.chain.push_back({"trim", rp, rhs, {}, {{PadKind::Zero, comp}, {PadKind::One, comp}},
                        Morphism::diagonal(pm.transpose(), pm)});
  return cert;
}

bool verify_certificate(const IdempotentPair& p, const DimCertificate& c) {
  if (c.chain.size() != 2) return false;
  if (!(c.chain[0].lhs == pair_sum(p, pair_trivial(complement(p.a)))) || !(c.chain[1].lhs == c.chain[0].rhs)) return false;
  if (!(c.chain[1].rhs.b == c.trimmed.h)) return false;
  if (c.dim != static_cast<long long>(c.kept.size()) || c.trimmed.omega.strand_count() != c.dim) return false;
  for (const auto& w : c.chain)
    if (!verify_witness(w)) return false;
  return is_regular(c.trimmed);
}

}  // namespace vgrass
