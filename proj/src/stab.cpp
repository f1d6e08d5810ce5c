// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include "vgrass/stab.hpp"

#include <algorithm>
#include <cmath>

namespace vgrass {

namespace {

IndexSet nat() { return IndexSet::tail_n("n"); }

bool is_nat(const IndexSet& s) { return s.strand_count() == 1 && s.strands()[0].kind == StrandKind::TailN; }

Scalar power(const Scalar& x, long long k, const Ring& ring) {
  Scalar r = ring.one();
  for (long long i = 0; i < k; ++i) r = r * x;
  return r;
}

std::vector<std::pair<Pos, Scalar>> cstab_column(const TrigAngle& a, long long j, bool signed_form) {
  const Ring& ring = a.ring;
  std::vector<std::pair<Pos, Scalar>> out;
  auto push = [&](long long i, Scalar v) {
    if (signed_form && (i + j) % 2 != 0) v = -v;
    if (!ring.near_zero(v)) out.push_back({{0, i}, v});
  };
  Scalar s2 = a.s * a.s;
  push(0, j == 0 ? a.s : power(a.t, j, ring) * a.s);
  for (long long i = 1; i <= j; ++i) push(i, power(a.t, j - i, ring) * s2);
  push(j + 1, -a.t);
  return out;
}

}  // namespace

TrigAngle TrigAngle::symbolic() {
  Ring r = Ring::trig();
  return {r, r.s(), r.t()};
}

TrigAngle TrigAngle::numeric(double theta, double tolerance) {
  Ring r = Ring::floats(tolerance);
  return {r, r.from_double(std::cos(theta)), r.from_double(std::sin(theta))};
}

TrigAngle TrigAngle::exact(const Ring& ring, Scalar s, Scalar t) {
  if (!ring.eq(s * s + t * t, ring.one())) throw StabError("angle does not satisfy s^2 + t^2 = 1");
  return {ring, std::move(s), std::move(t)};
}

TrigAngle TrigAngle::zero(const Ring& ring) { return {ring, ring.one(), ring.zero()}; }

TrigAngle TrigAngle::quarter(const Ring& ring) { return {ring, ring.zero(), ring.one()}; }

ColumnFiniteOperator cstab(const TrigAngle& angle) {
  TrigAngle a = TrigAngle::exact(angle.ring, angle.s, angle.t);
  return ColumnFiniteOperator(nat(), nat(), a.ring, [a](const Pos& c) { return cstab_column(a, c.pos, false); });
}

ColumnFiniteOperator cstab_signed(const TrigAngle& angle) {
  TrigAngle a = TrigAngle::exact(angle.ring, angle.s, angle.t);
  return ColumnFiniteOperator(nat(), nat(), a.ring, [a](const Pos& c) { return cstab_column(a, c.pos, true); });
}

ColumnFiniteOperator compose(const ColumnFiniteOperator& c, const ColumnFiniteOperator& d) {
  Ring ring = c.ring();
  return ColumnFiniteOperator(c.rows(), d.cols(), ring, [c, d, ring](const Pos& j) {
    std::map<Pos, Scalar> acc;
    for (const auto& [i, dv] : d.column(j))
      for (const auto& [r, cv] : c.column(i)) {
        auto [it, fresh] = acc.emplace(r, cv * dv);
        if (!fresh) it->second += cv * dv;
      }
    std::vector<std::pair<Pos, Scalar>> out;
    for (const auto& [r, v] : acc)
      if (!ring.near_zero(v)) out.push_back({r, v});
    return out;
  });
}

WedgeVector WedgeVector::basis(const Ring& ring, const Wedge& indices, const Scalar& v) {
  Wedge w = indices;
  bool odd = false;
  for (size_t i = 0; i < w.size(); ++i)
    for (size_t j = 0; j + 1 < w.size() - i; ++j)
      if (w[j] > w[j + 1]) {
        std::swap(w[j], w[j + 1]);
        odd = !odd;
      }
  WedgeVector out{ring, {}};
  if (std::adjacent_find(w.begin(), w.end()) != w.end()) return out;
  out.add(w, odd ? -v : v);
  return out;
}

void WedgeVector::add(const Wedge& sorted, const Scalar& v) {
  auto [it, fresh] = terms.emplace(sorted, v);
  if (!fresh) it->second += v;
  if (ring.near_zero(it->second)) terms.erase(it);
}

bool WedgeVector::operator==(const WedgeVector& o) const {
  if (terms.size() != o.terms.size()) return false;
  for (const auto& [k, v] : terms) {
    auto it = o.terms.find(k);
    if (it == o.terms.end() || !ring.eq(v, it->second)) return false;
  }
  return true;
}

WedgeVector qu1_apply(const ColumnFiniteOperator& c, const WedgeVector& w) {
  WedgeVector out{w.ring, {}};
  for (const auto& [idx, coeff] : w.terms) {
    std::map<Wedge, Scalar> partial{{Wedge{}, coeff}};
    for (long long i : idx) {
      std::map<Wedge, Scalar> next;
      for (const auto& [tuple, v] : partial)
        for (const auto& [row, cv] : c.column({0, i})) {
          if (std::binary_search(tuple.begin(), tuple.end(), row.pos)) continue;
          auto at = std::upper_bound(tuple.begin(), tuple.end(), row.pos);
          long long moved = tuple.end() - at;
          Wedge t = tuple;
          t.insert(t.begin() + (at - tuple.begin()), row.pos);
          Scalar term = v * cv;
          if (moved % 2) term = -term;
          auto [it, fresh] = next.emplace(t, term);
          if (!fresh) it->second += term;
        }
      partial = std::move(next);
    }
    for (const auto& [tuple, v] : partial) out.add(tuple, v);
  }
  return out;
}

long long v_code(const Wedge& w) {
  long long n = 0;
  for (long long i : w) {
    if (i < 0 || i > 61) throw StabError("wedge index out of range for V");
    n += 1LL << i;
  }
  return n;
}

Wedge v_index(long long n) {
  if (n < 0) throw StabError("V is defined on N");
  Wedge w;
  for (long long i = 0; n; ++i, n >>= 1)
    if (n & 1) w.push_back(i);
  return w;
}

std::map<long long, Scalar> v_map(const WedgeVector& w) {
  std::map<long long, Scalar> out;
  for (const auto& [idx, v] : w.terms) out.emplace(v_code(idx), v);
  return out;
}

ColumnFiniteOperator quantize(const ColumnFiniteOperator& c) {
  Ring ring = c.ring();
  return ColumnFiniteOperator(nat(), nat(), ring, [c, ring](const Pos& j) {
    WedgeVector img = qu1_apply(c, WedgeVector::basis(ring, v_index(j.pos), ring.one()));
    std::vector<std::pair<Pos, Scalar>> out;
    for (const auto& [n, v] : v_map(img)) out.push_back({{0, n}, v});
    return out;
  });
}

Matrix hv_conjugation(const Matrix& a) {
  if (!is_nat(a.rows()) || !is_nat(a.cols()) || !a.is_K())
    throw StabError("hv_conjugation needs a finitely supported matrix over N");
  Matrix out = Matrix::zero(a.rows(), a.cols(), a.ring());
  for (const auto& [k, v] : a.fin()) out.add_entry({0, 2 * k.rp}, {0, 2 * k.cp}, v);
  return out;
}

Matrix hv_homotopy(const Matrix& a, const TrigAngle& angle) {
  if (!is_nat(a.rows()) || !is_nat(a.cols()) || !a.is_K())
    throw StabError("hv_homotopy needs a finitely supported matrix over N");
  return quantize(cstab_signed(angle)).sandwich(lift_matrix(a, angle.ring));
}

Matrix lift_matrix(const Matrix& a, const Ring& ring) {
  if (a.ring() == ring) return a;
  RingKind k = a.ring().kind();
  if (k != RingKind::Integers && k != RingKind::Rationals)
    throw StabError("only integer and rational matrices can be carried into another ring");
  return a.map(ring, [&ring](const Scalar& x) {
    if (const auto* z = std::get_if<mpz_class>(&x.payload())) return ring.from_rational(mpq_class(*z));
    return ring.from_rational(std::get<mpq_class>(x.payload()));
  });
}

Stabilized stabilize_idempotent(const Matrix& b) {
  IndexSet s = ss_space();
  if (!b.rows().same_layout(s) || !b.cols().same_layout(s)) throw StabError("expected a matrix over {0,1} x N");
  IndexSet n = nat();
  Matrix base = r0_pattern(n, b.ring()).with_shape(s, s);
  Matrix diff = b.with_shape(s, s) - base;
  if (!diff.is_K()) throw StabError("corner convention violated: b - (0 + 1) is not finitely supported");
  std::vector<Matrix> blocks = {extract(diff, 0, 0, n, n), extract(diff, 0, 1, n, n), extract(diff, 1, 0, n, n),
                                extract(diff, 1, 1, n, n)};
  auto value = [blocks, s, n](const TrigAngle& angle) {
    std::vector<Matrix> h;
    for (const auto& m : blocks) h.push_back(hv_homotopy(m, angle));
    return assemble(s, s, {{h[0], h[1]}, {h[2], h[3]}}) + r0_pattern(n, angle.ring).with_shape(s, s);
  };
  return {b, value(TrigAngle::quarter(b.ring())), value};
}

IndexSet room_space() { return unite(nat(), split_tails(IndexSet::tail_n("m"), 2).target); }

Matrix room_rotation(const TrigAngle& angle) {
  TrigAngle a = TrigAngle::exact(angle.ring, angle.s, angle.t);
  IndexSet x = room_space();
  Matrix u(x, x, a.ring);
  u.add_symbol(0, 0, 0, a.s);
  u.add_symbol(0, 1, 0, -a.t);
  u.add_symbol(1, 0, 0, a.t);
  u.add_symbol(1, 1, 0, a.s);
  u.add_symbol(2, 2, 0, a.ring.one());
  return u;
}

Morphism make_room(const Matrix& phi, const Matrix& phi_inv, const TrigAngle& angle) {
  if (!is_nat(phi.rows()) || !phi.is_square()) throw StabError("phi must act on N");
  Matrix p = lift_matrix(phi, angle.ring), pi = lift_matrix(phi_inv, angle.ring);
  Matrix one = Matrix::identity(phi.rows(), angle.ring);
  if (!equal(p * pi, one) || !equal(pi * p, one)) throw StabError("phi is not a unit with the given inverse");
  if (!approx_equiv(p, one)) throw StabError("phi must differ from 1 by a finite matrix");
  IndexSet x = room_space();
  Matrix rest = Matrix::identity(split_tails(IndexSet::tail_n("m"), 2).target, angle.ring);
  Matrix u = room_rotation(angle), u_back = room_rotation(angle.negated());
  Matrix g = u * direct_sum(p, rest).with_shape(x, x) * u_back;
  Matrix g_inv = u * direct_sum(pi, rest).with_shape(x, x) * u_back;
  return Morphism::diagonal(g, g_inv);
}

}  // namespace vgrass
