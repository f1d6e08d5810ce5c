// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include "vgrass/random.hpp"

namespace vgrass {

namespace {

using Dense = std::vector<std::vector<mpq_class>>;

Dense dense_identity(int n) {
  Dense d(n, std::vector<mpq_class>(n));
  for (int i = 0; i < n; ++i) d[i][i] = 1;
  return d;
}

Dense dense_mul(const Dense& a, const Dense& b) {
  int n = static_cast<int>(a.size()), m = static_cast<int>(b[0].size()), k = static_cast<int>(b.size());
  Dense c(n, std::vector<mpq_class>(m));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (int j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

// Inverse of a unit lower (lower=true) or unit upper triangular matrix.
Dense unit_triangular_inverse(const Dense& t, bool lower) {
  int n = static_cast<int>(t.size());
  Dense inv = dense_identity(n);
  if (lower) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) {
        mpq_class s = 0;
        for (int k = j; k < i; ++k) s += t[i][k] * inv[k][j];
        inv[i][j] = -s;
      }
  } else {
    for (int i = n - 1; i >= 0; --i)
      for (int j = n - 1; j > i; --j) {
        mpq_class s = 0;
        for (int k = i + 1; k <= j; ++k) s += t[i][k] * inv[k][j];
        inv[i][j] = -s;
      }
  }
  return inv;
}

int block_size(const Ring& ring) { return ring.kind() == RingKind::MatrixRing ? ring.size() : 1; }

Ring scalar_ring(const Ring& ring) { return ring.kind() == RingKind::MatrixRing ? ring.base() : ring; }

Matrix to_matrix(const Dense& d, const IndexSet& omega, const Ring& ring) {
  int b = block_size(ring);
  Ring base = scalar_ring(ring);
  Matrix m(omega, omega, ring);
  int n = omega.strand_count();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Scalar v;
      if (b == 1) {
        v = ring.from_rational(d[i][j]);
      } else {
        MatPayload p{b, {}};
        for (int r = 0; r < b; ++r)
          for (int c = 0; c < b; ++c) p.e.push_back(base.from_rational(d[i * b + r][j * b + c]));
        v = Scalar(p);
      }
      m.add_entry({i, 0}, {j, 0}, v);
    }
  return m;
}

void require_finite(const IndexSet& omega) {
  if (!omega.is_finite()) throw MatError("random generators need a finite index set");
}

std::pair<Dense, Dense> unit_pair(Rng& rng, int n) {
  std::uniform_int_distribution<int> coef(-2, 2);
  Dense l = dense_identity(n), u = dense_identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      l[i][j] = coef(rng);
      u[j][i] = coef(rng);
    }
  Dense g = dense_mul(l, u);
  Dense gi = dense_mul(unit_triangular_inverse(u, false), unit_triangular_inverse(l, true));
  return {g, gi};
}

}  // namespace

Scalar random_scalar(Rng& rng, const Ring& ring, int range) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> den(1, 3);
  if (ring.kind() == RingKind::MatrixRing) {
    Ring base = ring.base();
    MatPayload p{ring.size(), {}};
    for (int i = 0; i < ring.size() * ring.size(); ++i) p.e.push_back(random_scalar(rng, base, range));
    return Scalar(p);
  }
  if (ring.kind() == RingKind::Integers) return ring.from_int(num(rng));
  if (ring.kind() == RingKind::TrigQuot) {
    TrigPoly t;
    for (int i = 0; i < 2; ++i) t.c.push_back(mpq_class(num(rng), den(rng)));
    t.ct.push_back(mpq_class(num(rng), den(rng)));
    for (auto& x : t.c) x.canonicalize();
    for (auto& x : t.ct) x.canonicalize();
    t.trim();
    return Scalar(t);
  }
  mpq_class q(num(rng), den(rng));
  q.canonicalize();
  return ring.from_rational(q);
}

std::pair<Matrix, Matrix> random_unit(Rng& rng, const IndexSet& omega, const Ring& ring) {
  require_finite(omega);
  auto [g, gi] = unit_pair(rng, omega.strand_count() * block_size(ring));
  return {to_matrix(g, omega, ring), to_matrix(gi, omega, ring)};
}

Matrix random_idempotent(Rng& rng, const IndexSet& omega, const Ring& ring) {
  require_finite(omega);
  int n = omega.strand_count() * block_size(ring);
  auto [g, gi] = unit_pair(rng, n);
  std::bernoulli_distribution bit(0.5);
  Dense d(n, std::vector<mpq_class>(n));
  for (int i = 0; i < n; ++i) d[i][i] = bit(rng) ? 1 : 0;
  return to_matrix(dense_mul(dense_mul(g, d), gi), omega, ring);
}

CommutingUnit random_commuting(Rng& rng, const IndexSet& omega, const Ring& ring) {
  require_finite(omega);
  int n = omega.strand_count() * block_size(ring);
  auto [g, gi] = unit_pair(rng, n);
  std::bernoulli_distribution bit(0.5);
  std::uniform_int_distribution<int> pick(0, 5);
  const mpq_class rational_choices[] = {1, -1, 2, mpq_class(1, 2), -3, mpq_class(-2, 3)};
  bool integral = scalar_ring(ring).kind() == RingKind::Integers;
  Dense d(n, std::vector<mpq_class>(n)), k(n, std::vector<mpq_class>(n)), ki(n, std::vector<mpq_class>(n));
  for (int i = 0; i < n; ++i) {
    d[i][i] = bit(rng) ? 1 : 0;
    mpq_class v = integral ? mpq_class(bit(rng) ? 1 : -1) : rational_choices[pick(rng)];
    k[i][i] = v;
    ki[i][i] = 1 / v;
  }
  return {to_matrix(dense_mul(dense_mul(g, d), gi), omega, ring),
          to_matrix(dense_mul(dense_mul(g, k), gi), omega, ring),
          to_matrix(dense_mul(dense_mul(g, ki), gi), omega, ring)};
}

std::pair<Matrix, Matrix> random_local_unit(Rng& rng, const IndexSet& omega, const Ring& ring, long long width) {
  std::vector<std::pair<long long, Pos>> table;
  for (int s = 0; s < omega.strand_count(); ++s) {
    StrandKind kind = omega.strands()[s].kind;
    if (kind == StrandKind::Point) {
      table.push_back({static_cast<long long>(table.size()), {s, 0}});
      continue;
    }
    for (long long p = kind == StrandKind::TailZ ? -width : 0; p < width; ++p)
      table.push_back({static_cast<long long>(table.size()), {s, p}});
  }
  IndexSet f = IndexSet::range(static_cast<int>(table.size()));
  Relabeling r = Relabeling::finite_map(f, omega, table);
  auto [g, gi] = random_unit(rng, f, ring);
  Matrix rest = Matrix::identity(omega, ring) - push_forward(r, Matrix::identity(f, ring));
  return {push_forward(r, g) + rest, push_forward(r, gi) + rest};
}

Matrix random_local_idempotent(Rng& rng, const IndexSet& omega, const Ring& ring, long long width) {
  std::bernoulli_distribution bit(0.5);
  Matrix d(omega, omega, ring);
  for (int s = 0; s < omega.strand_count(); ++s) {
    if (!bit(rng)) continue;
    if (omega.is_tail(s)) d.add_symbol(s, s, 0, ring.one());
    else d.add_entry({s, 0}, {s, 0}, ring.one());
  }
  auto [g, gi] = random_local_unit(rng, omega, ring, width);
  return g * d * gi;
}

Matrix random_finite(Rng& rng, const IndexSet& rows, const IndexSet& cols, const Ring& ring, long long radius,
                     double density) {
  Matrix m(rows, cols, ring);
  std::bernoulli_distribution keep(density);
  auto rp = window_positions(rows, radius), cp = window_positions(cols, radius);
  for (const auto& r : rp)
    for (const auto& c : cp)
      if (keep(rng)) m.add_entry(r, c, random_scalar(rng, ring));
  return m;
}

Matrix random_structured(Rng& rng, const IndexSet& rows, const IndexSet& cols, const Ring& ring, long long bw,
                         long long radius) {
  Matrix m = random_finite(rng, rows, cols, ring, radius);
  std::bernoulli_distribution keep(0.5);
  for (int r = 0; r < rows.strand_count(); ++r)
    for (int c = 0; c < cols.strand_count(); ++c) {
      StrandKind a = rows.strands()[r].kind, b = cols.strands()[c].kind;
      if (a == StrandKind::Point || a != b) continue;
      for (long long d = -bw; d <= bw; ++d)
        if (keep(rng)) m.add_symbol(r, c, d, random_scalar(rng, ring));
    }
  return m;
}

}  // namespace vgrass
