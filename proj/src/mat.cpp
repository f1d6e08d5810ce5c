// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include "vgrass/mat.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace vgrass {

namespace {

long long floor_div(long long a, long long k) { return a >= 0 ? a / k : -((-a + k - 1) / k); }

void check_ring(const Ring& a, const Ring& b) {
  if (a != b) throw MatError("ring mismatch: " + a.name() + " vs " + b.name());
}

void add_to(Laurent& f, long long d, const Scalar& v) {
  auto it = f.find(d);
  if (it == f.end()) f.emplace(d, v);
  else it->second += v;
}

Scalar transpose_entry(const Scalar& x) {
  if (auto* m = std::get_if<MatPayload>(&x.payload())) {
    MatPayload r{m->n, std::vector<Scalar>(m->e.size())};
    for (int i = 0; i < m->n; ++i)
      for (int j = 0; j < m->n; ++j) r.e[j * m->n + i] = transpose_entry(m->e[i * m->n + j]);
    return Scalar(r);
  }
  return x;
}

}  // namespace

Matrix::Matrix(IndexSet rows, IndexSet cols, Ring ring)
    : rows_(std::move(rows)), cols_(std::move(cols)), ring_(std::move(ring)) {}

Matrix Matrix::zero(const IndexSet& rows, const IndexSet& cols, const Ring& ring) { return Matrix(rows, cols, ring); }

Matrix Matrix::identity(const IndexSet& set, const Ring& ring) { return scalar(set, ring.one(), ring); }

Matrix Matrix::scalar(const IndexSet& set, const Scalar& lambda, const Ring& ring) {
  Matrix m(set, set, ring);
  if (lambda.is_zero()) return m;
  for (int s = 0; s < set.strand_count(); ++s) {
    if (set.is_tail(s)) m.sym_[{s, s}][0] = lambda;
    else m.fin_[{s, 0, s, 0}] = lambda;
  }
  return m;
}

Matrix Matrix::unit(const IndexSet& rows, const IndexSet& cols, const Ring& ring, Pos r, Pos c, const Scalar& v) {
  Matrix m(rows, cols, ring);
  m.add_entry(r, c, v);
  return m;
}

Matrix Matrix::shift(const IndexSet& rows, const IndexSet& cols, const Ring& ring, int rs, int cs, long long d) {
  Matrix m(rows, cols, ring);
  m.add_symbol(rs, cs, d, ring.one());
  return m;
}

void Matrix::add_symbol(int rs, int cs, long long d, const Scalar& v) {
  if (rs < 0 || rs >= rows_.strand_count() || cs < 0 || cs >= cols_.strand_count())
    throw MatError("symbol block out of range");
  StrandKind a = rows_.strands()[rs].kind, b = cols_.strands()[cs].kind;
  if (a == StrandKind::Point || a != b) throw MatError("symbols need two tails of the same kind");
  if (v.is_zero()) return;
  Laurent& f = sym_[{rs, cs}];
  add_to(f, d, v);
  if (f[d].is_zero()) f.erase(d);
  if (f.empty()) sym_.erase({rs, cs});
}

void Matrix::add_entry(Pos r, Pos c, const Scalar& v) {
  if (!rows_.valid_pos(r) || !cols_.valid_pos(c)) throw MatError("entry position out of range");
  if (v.is_zero()) return;
  FinKey k{r.strand, r.pos, c.strand, c.pos};
  auto it = fin_.find(k);
  if (it == fin_.end()) {
    fin_.emplace(k, v);
    return;
  }
  it->second += v;
  if (it->second.is_zero()) fin_.erase(it);
}

Scalar Matrix::entry(Pos r, Pos c) const {
  Scalar v = ring_.zero();
  auto it = fin_.find(FinKey{r.strand, r.pos, c.strand, c.pos});
  if (it != fin_.end()) v += it->second;
  auto st = sym_.find({r.strand, c.strand});
  if (st != sym_.end()) {
    auto ct = st->second.find(r.pos - c.pos);
    if (ct != st->second.end()) v += ct->second;
  }
  return v;
}

Laurent Matrix::symbol(int rs, int cs) const {
  auto it = sym_.find({rs, cs});
  return it == sym_.end() ? Laurent{} : it->second;
}

long long Matrix::bandwidth() const {
  long long w = 0;
  for (const auto& [k, f] : sym_)
    for (const auto& [d, v] : f) w = std::max(w, std::llabs(d));
  return w;
}

long long Matrix::support_radius() const {
  long long w = 0;
  for (const auto& [k, v] : fin_) w = std::max({w, std::llabs(k.rp), std::llabs(k.cp)});
  return w;
}

void Matrix::prune() {
  for (auto it = sym_.begin(); it != sym_.end();) {
    for (auto jt = it->second.begin(); jt != it->second.end();) {
      if (jt->second.is_zero()) jt = it->second.erase(jt);
      else ++jt;
    }
    if (it->second.empty()) it = sym_.erase(it);
    else ++it;
  }
  for (auto it = fin_.begin(); it != fin_.end();) {
    if (it->second.is_zero()) it = fin_.erase(it);
    else ++it;
  }
}

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& [k, f] : r.sym_)
    for (auto& [d, v] : f) v = -v;
  for (auto& [k, v] : r.fin_) v = -v;
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (!a.rows_.same_layout(b.rows_) || !a.cols_.same_layout(b.cols_))
    throw MatError("add: shape mismatch " + a.rows_.to_string() + "x" + a.cols_.to_string() + " vs " +
                   b.rows_.to_string() + "x" + b.cols_.to_string());
  check_ring(a.ring_, b.ring_);
  Matrix r = a;
  for (const auto& [k, f] : b.sym_) {
    Laurent& g = r.sym_[k];
    for (const auto& [d, v] : f) add_to(g, d, v);
  }
  for (const auto& [k, v] : b.fin_) {
    auto it = r.fin_.find(k);
    if (it == r.fin_.end()) r.fin_.emplace(k, v);
    else it->second += v;
  }
  r.prune();
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-b); }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (!a.cols_.same_layout(b.rows_))
    throw MatError("mul: shape mismatch " + a.cols_.to_string() + " vs " + b.rows_.to_string());
  check_ring(a.ring_, b.ring_);
  Matrix c(a.rows_, b.cols_, a.ring_);

  std::map<int, std::vector<std::pair<int, const Laurent*>>> bsym_by_row;  // k -> (c, g)
  for (const auto& [k, g] : b.sym_) bsym_by_row[k.first].push_back({k.second, &g});
  std::map<int, std::vector<std::pair<int, const Laurent*>>> asym_by_col;  // k -> (r, f)
  for (const auto& [k, f] : a.sym_) asym_by_col[k.second].push_back({k.first, &f});

  // symbol x symbol, with the boundary correction on N-tails
  for (const auto& [key, f] : a.sym_) {
    auto it = bsym_by_row.find(key.second);
    if (it == bsym_by_row.end()) continue;
    int r = key.first, k = key.second;
    for (const auto& [cs, gp] : it->second) {
      const Laurent& g = *gp;
      Laurent& h = c.sym_[{r, cs}];
      for (const auto& [d1, v1] : f)
        for (const auto& [d2, v2] : g) add_to(h, d1 + d2, v1 * v2);
      if (a.cols_.strands()[k].kind != StrandKind::TailN) continue;
      long long maxf = f.rbegin()->first, ming = g.begin()->first;
      for (long long n = 0; n < maxf; ++n)
        for (long long m = 0; m < -ming; ++m)
          for (long long j = std::max(n - maxf, m + ming); j < 0; ++j) {
            auto fi = f.find(n - j);
            auto gi = g.find(j - m);
            if (fi == f.end() || gi == g.end()) continue;
            FinKey fk{r, n, cs, m};
            Scalar v = -(fi->second * gi->second);
            auto ct = c.fin_.find(fk);
            if (ct == c.fin_.end()) c.fin_.emplace(fk, v);
            else ct->second += v;
          }
    }
  }

  auto add_fin = [&](const FinKey& k, const Scalar& v) {
    auto it = c.fin_.find(k);
    if (it == c.fin_.end()) c.fin_.emplace(k, v);
    else it->second += v;
  };

  // symbol x finite
  for (const auto& [bk, bv] : b.fin_) {
    auto it = asym_by_col.find(bk.rs);
    if (it == asym_by_col.end()) continue;
    for (const auto& [r, fp] : it->second)
      for (const auto& [d, fv] : *fp) {
        Pos rp{r, bk.rp + d};
        if (!c.rows_.valid_pos(rp)) continue;
        add_fin({r, rp.pos, bk.cs, bk.cp}, fv * bv);
      }
  }
  // finite x symbol
  for (const auto& [ak, av] : a.fin_) {
    auto it = bsym_by_row.find(ak.cs);
    if (it == bsym_by_row.end()) continue;
    for (const auto& [cs, gp] : it->second)
      for (const auto& [d, gv] : *gp) {
        Pos cp{cs, ak.cp - d};
        if (!c.cols_.valid_pos(cp)) continue;
        add_fin({ak.rs, ak.rp, cs, cp.pos}, av * gv);
      }
  }
  // finite x finite
  std::map<Pos, std::vector<std::pair<Pos, const Scalar*>>> brow;
  for (const auto& [bk, bv] : b.fin_) brow[bk.row()].push_back({bk.col(), &bv});
  for (const auto& [ak, av] : a.fin_) {
    auto it = brow.find(ak.col());
    if (it == brow.end()) continue;
    for (const auto& [cp, bv] : it->second) add_fin({ak.rs, ak.rp, cp.strand, cp.pos}, av * *bv);
  }
  c.prune();
  return c;
}

Matrix operator*(const Scalar& s, const Matrix& a) {
  Matrix r = a;
  for (auto& [k, f] : r.sym_)
    for (auto& [d, v] : f) v = s * v;
  for (auto& [k, v] : r.fin_) v = s * v;
  r.prune();
  return r;
}

Matrix operator*(const Matrix& a, const Scalar& s) {
  Matrix r = a;
  for (auto& [k, f] : r.sym_)
    for (auto& [d, v] : f) v = v * s;
  for (auto& [k, v] : r.fin_) v = v * s;
  r.prune();
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(cols_, rows_, ring_);
  for (const auto& [k, f] : sym_) {
    Laurent& g = r.sym_[{k.second, k.first}];
    for (const auto& [d, v] : f) g.emplace(-d, transpose_entry(v));
  }
  for (const auto& [k, v] : fin_) r.fin_.emplace(FinKey{k.cs, k.cp, k.rs, k.rp}, transpose_entry(v));
  return r;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_.same_layout(o.rows_) && cols_.same_layout(o.cols_) && ring_ == o.ring_ && sym_ == o.sym_ &&
         fin_ == o.fin_;
}

Matrix Matrix::with_shape(const IndexSet& rows, const IndexSet& cols) const {
  if (!rows.same_layout(rows_) || !cols.same_layout(cols_)) throw MatError("with_shape: layout mismatch");
  Matrix r = *this;
  r.rows_ = rows;
  r.cols_ = cols;
  return r;
}

Matrix Matrix::map(const Ring& ring, const std::function<Scalar(const Scalar&)>& f) const {
  Matrix r(rows_, cols_, ring);
  for (const auto& [k, g] : sym_) {
    Laurent& h = r.sym_[k];
    for (const auto& [d, v] : g) h.emplace(d, f(v));
  }
  for (const auto& [k, v] : fin_) r.fin_.emplace(k, f(v));
  r.prune();
  return r;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << rows_.to_string() << " x " << cols_.to_string() << " over " << ring_.name() << "\n";
  for (const auto& [k, f] : sym_) {
    os << "  sym(" << k.first << "," << k.second << "):";
    for (const auto& [d, v] : f) os << " [" << d << "]" << v.to_string();
    os << "\n";
  }
  for (const auto& [k, v] : fin_)
    os << "  (" << k.rs << ":" << k.rp << "," << k.cs << ":" << k.cp << ") " << v.to_string() << "\n";
  return os.str();
}

bool equal(const Matrix& a, const Matrix& b) {
  if (a.ring().exact()) return a == b;
  if (!a.rows().same_layout(b.rows()) || !a.cols().same_layout(b.cols())) return false;
  Matrix d = a - b;
  const Ring& r = a.ring();
  for (const auto& [k, f] : d.symbols())
    for (const auto& [e, v] : f)
      if (!r.near_zero(v)) return false;
  for (const auto& [k, v] : d.fin())
    if (!r.near_zero(v)) return false;
  return true;
}

bool approx_equiv(const Matrix& a, const Matrix& b) {
  Matrix d = a - b;
  if (a.ring().exact()) return d.is_K();
  for (const auto& [k, f] : d.symbols())
    for (const auto& [e, v] : f)
      if (!a.ring().near_zero(v)) return false;
  return true;
}

bool is_idempotent(const Matrix& a) { return equal(a * a, a); }

Scalar finite_trace(const Matrix& a) {
  if (!a.is_K()) throw MatError("finite_trace: matrix is not finitely supported");
  if (!a.is_square()) throw MatError("finite_trace: matrix is not square");
  Scalar t = a.ring().zero();
  for (const auto& [k, v] : a.fin())
    if (k.rs == k.cs && k.rp == k.cp) t += v;
  return t;
}

Matrix complement(const Matrix& a) { return Matrix::identity(a.rows(), a.ring()).with_shape(a.rows(), a.cols()) - a; }

Matrix kronecker(const Matrix& a, const Matrix& b) {
  if (!a.ring().commutative()) throw MatError("kronecker: coefficient ring is not commutative");
  return kronecker_central(a, b);
}

Matrix kronecker_central(const Matrix& a, const Matrix& b) {
  check_ring(a.ring(), b.ring());
  IndexSet rows = product(a.rows(), b.rows());
  IndexSet cols = product(a.cols(), b.cols());
  Matrix c(rows, cols, a.ring());
  int nbr = b.rows().strand_count(), nbc = b.cols().strand_count();
  auto rpos = [&](Pos p, Pos q) {
    return Pos{p.strand * nbr + q.strand, a.rows().is_tail(p.strand) ? p.pos : q.pos};
  };
  auto cpos = [&](Pos p, Pos q) {
    return Pos{p.strand * nbc + q.strand, a.cols().is_tail(p.strand) ? p.pos : q.pos};
  };
  if (!a.symbols().empty() && !b.symbols().empty()) throw MatError("kronecker: symbol x symbol has no finite factor");
  for (const auto& [ak, f] : a.symbols())
    for (const auto& [bk, bv] : b.fin())
      for (const auto& [d, v] : f) c.add_symbol(ak.first * nbr + bk.rs, ak.second * nbc + bk.cs, d, v * bv);
  for (const auto& [ak, av] : a.fin()) {
    for (const auto& [bk, g] : b.symbols())
      for (const auto& [d, v] : g) c.add_symbol(ak.rs * nbr + bk.first, ak.cs * nbc + bk.second, d, av * v);
    for (const auto& [bk, bv] : b.fin()) c.add_entry(rpos(ak.row(), bk.row()), cpos(ak.col(), bk.col()), av * bv);
  }
  return c;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  IndexSet rows = unite(a.rows(), b.rows());
  IndexSet cols = unite(a.cols(), b.cols());
  return assemble(rows, cols,
                  {{a, Matrix::zero(a.rows(), b.cols(), a.ring())}, {Matrix::zero(b.rows(), a.cols(), a.ring()), b}});
}

Matrix direct_sum(const std::vector<Matrix>& parts) {
  if (parts.empty()) throw MatError("direct_sum of nothing");
  Matrix acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) acc = direct_sum(parts[i], acc);
  return acc;
}

Matrix assemble(const IndexSet& rows, const IndexSet& cols, const std::vector<std::vector<Matrix>>& grid) {
  if (grid.empty()) throw MatError("assemble: empty grid");
  const Ring& ring = grid[0][0].ring();
  Matrix c(rows, cols, ring);
  std::vector<Strand> rl, cl;
  std::vector<int> roff, coff;
  for (const auto& row : grid) {
    roff.push_back(static_cast<int>(rl.size()));
    rl.insert(rl.end(), row[0].rows().strands().begin(), row[0].rows().strands().end());
  }
  for (const auto& m : grid[0]) {
    coff.push_back(static_cast<int>(cl.size()));
    cl.insert(cl.end(), m.cols().strands().begin(), m.cols().strands().end());
  }
  auto same = [](const std::vector<Strand>& x, const std::vector<Strand>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i].kind != y[i].kind) return false;
    return true;
  };
  if (!same(rl, rows.strands()) || !same(cl, cols.strands())) throw MatError("assemble: grid does not tile the shape");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].size() != grid[0].size()) throw MatError("assemble: ragged grid");
    for (size_t j = 0; j < grid[i].size(); ++j) {
      const Matrix& m = grid[i][j];
      if (!m.rows().same_layout(grid[i][0].rows()) || !m.cols().same_layout(grid[0][j].cols()))
        throw MatError("assemble: block shape mismatch");
      check_ring(ring, m.ring());
      for (const auto& [k, f] : m.symbols())
        for (const auto& [d, v] : f) c.add_symbol(k.first + roff[i], k.second + coff[j], d, v);
      for (const auto& [k, v] : m.fin())
        c.add_entry({k.rs + roff[i], k.rp}, {k.cs + coff[j], k.cp}, v);
    }
  }
  return c;
}

Matrix extract(const Matrix& a, int r0, int c0, const IndexSet& rows, const IndexSet& cols) {
  int nr = rows.strand_count(), nc = cols.strand_count();
  if (r0 < 0 || c0 < 0 || r0 + nr > a.rows().strand_count() || c0 + nc > a.cols().strand_count())
    throw MatError("extract: range out of bounds");
  for (int i = 0; i < nr; ++i)
    if (rows.strands()[i].kind != a.rows().strands()[r0 + i].kind) throw MatError("extract: row layout mismatch");
  for (int j = 0; j < nc; ++j)
    if (cols.strands()[j].kind != a.cols().strands()[c0 + j].kind) throw MatError("extract: col layout mismatch");
  Matrix c(rows, cols, a.ring());
  for (const auto& [k, f] : a.symbols()) {
    if (k.first < r0 || k.first >= r0 + nr || k.second < c0 || k.second >= c0 + nc) continue;
    for (const auto& [d, v] : f) c.add_symbol(k.first - r0, k.second - c0, d, v);
  }
  for (const auto& [k, v] : a.fin()) {
    if (k.rs < r0 || k.rs >= r0 + nr || k.cs < c0 || k.cs >= c0 + nc) continue;
    c.add_entry({k.rs - r0, k.rp}, {k.cs - c0, k.cp}, v);
  }
  return c;
}

Matrix relabel_matrix(const Relabeling& r, const Ring& ring) {
  Matrix m(r.target(), r.source(), ring);
  for (int s = 0; s < r.source().strand_count(); ++s) {
    const auto& im = r.images()[s];
    if (r.source().is_tail(s)) m.add_symbol(im.strand, s, im.offset, ring.one());
    else m.add_entry({im.strand, im.offset}, {s, 0}, ring.one());
  }
  return m;
}

Matrix push_forward(const Relabeling& r, const Matrix& a) {
  Matrix rm = relabel_matrix(r, a.ring());
  return rm * a * rm.transpose();
}

Matrix split_forward(const Matrix& a, const TailSplit& rs, const TailSplit& cs) {
  if (!rs.source.same_layout(a.rows()) || !cs.source.same_layout(a.cols()))
    throw MatError("split_forward: layout mismatch");
  Matrix c(rs.target, cs.target, a.ring());
  if (!a.symbols().empty() && rs.k != cs.k) throw MatError("split_forward: symbols need equal split factors");
  long long k = rs.k;
  for (const auto& [key, f] : a.symbols())
    for (long long i = 0; i < k; ++i)
      for (long long j = 0; j < k; ++j)
        for (const auto& [e, v] : f) {
          long long num = e - i + j;
          if (((num % k) + k) % k != 0) continue;
          c.add_symbol(rs.first[key.first] + static_cast<int>(i), cs.first[key.second] + static_cast<int>(j),
                       floor_div(num, k), v);
        }
  for (const auto& [key, v] : a.fin()) c.add_entry(rs.forward(key.row()), cs.forward(key.col()), v);
  return c;
}

Matrix split_backward(const Matrix& a, const TailSplit& rs, const TailSplit& cs) {
  if (!rs.target.same_layout(a.rows()) || !cs.target.same_layout(a.cols()))
    throw MatError("split_backward: layout mismatch");
  Matrix c(rs.source, cs.source, a.ring());
  long long k = rs.k;
  for (const auto& [key, g] : a.symbols()) {
    Pos r = rs.backward({key.first, 0}), q = cs.backward({key.second, 0});
    for (const auto& [d, v] : g) {
      long long e = k * d + r.pos - q.pos;
      Laurent cur = c.symbol(r.strand, q.strand);
      auto it = cur.find(e);
      if (it == cur.end()) c.add_symbol(r.strand, q.strand, e, v);
      else if (!(it->second == v)) throw MatError("split_backward: symbols are not constant along merged diagonals");
    }
  }
  Matrix check_sym(rs.source, cs.source, a.ring());
  for (const auto& [key, f] : c.symbols())
    for (const auto& [d, v] : f) check_sym.add_symbol(key.first, key.second, d, v);
  Matrix resplit = split_forward(check_sym, rs, cs);
  if (resplit.symbols() != a.symbols()) throw MatError("split_backward: symbols are not block-Toeplitz consistent");
  for (const auto& [key, v] : a.fin()) c.add_entry(rs.backward(key.row()), cs.backward(key.col()), v);
  return c;
}

std::vector<Pos> window_positions(const IndexSet& set, long long n) {
  std::vector<Pos> out;
  for (int s = 0; s < set.strand_count(); ++s) {
    switch (set.strands()[s].kind) {
      case StrandKind::Point: out.push_back({s, 0}); break;
      case StrandKind::TailN:
        for (long long p = 0; p < n; ++p) out.push_back({s, p});
        break;
      case StrandKind::TailZ:
        for (long long p = -n; p < n; ++p) out.push_back({s, p});
        break;
    }
  }
  return out;
}

Window window(const Matrix& a, long long nrows, long long ncols) {
  Window w;
  w.rows = window_positions(a.rows(), nrows);
  w.cols = window_positions(a.cols(), ncols);
  w.e.reserve(w.rows.size() * w.cols.size());
  for (const auto& r : w.rows)
    for (const auto& c : w.cols) w.e.push_back(a.entry(r, c));
  return w;
}

Window window_product(const Window& a, const Window& b, const Ring& ring) {
  if (a.cols != b.rows) throw MatError("window_product: inner windows differ");
  Window w;
  w.rows = a.rows;
  w.cols = b.cols;
  w.e.assign(a.rows.size() * b.cols.size(), ring.zero());
  for (size_t i = 0; i < a.rows.size(); ++i)
    for (size_t k = 0; k < a.cols.size(); ++k) {
      const Scalar& x = a.at(i, k);
      if (x.is_zero()) continue;
      for (size_t j = 0; j < b.cols.size(); ++j) {
        const Scalar& y = b.at(k, j);
        if (!y.is_zero()) w.e[i * b.cols.size() + j] += x * y;
      }
    }
  return w;
}

Matrix evaluate(const Matrix& a, double s, double t, double tolerance) {
  Ring target = Ring::floats(tolerance);
  if (a.ring().kind() == RingKind::MatrixRing) target = Ring::matrix(target, a.ring().size());
  return a.map(target, [&](const Scalar& x) { return x.evaluated(s, t); });
}

ColumnFiniteOperator::ColumnFiniteOperator(IndexSet rows, IndexSet cols, Ring ring, Column column)
    : rows_(std::move(rows)), cols_(std::move(cols)), ring_(std::move(ring)), column_(std::move(column)) {}

std::vector<std::pair<Pos, Scalar>> ColumnFiniteOperator::column(const Pos& c) const {
  if (!cols_.valid_pos(c)) throw MatError("column index out of range");
  return column_(c);
}

Scalar ColumnFiniteOperator::entry(const Pos& r, const Pos& c) const {
  Scalar v = ring_.zero();
  for (const auto& [p, x] : column(c))
    if (p == r) v += x;
  return v;
}

Matrix ColumnFiniteOperator::apply(const Matrix& k) const {
  if (!k.is_K()) throw MatError("column-finite operator applied to a matrix that is not finitely supported");
  if (!k.rows().same_layout(cols_)) throw MatError("apply: shape mismatch");
  Matrix out(rows_, k.cols(), ring_);
  std::map<Pos, std::vector<std::pair<Pos, Scalar>>> cache;
  for (const auto& [key, v] : k.fin()) {
    auto it = cache.find(key.row());
    if (it == cache.end()) it = cache.emplace(key.row(), column(key.row())).first;
    for (const auto& [r, cv] : it->second) out.add_entry(r, key.col(), cv * v);
  }
  return out;
}

Matrix ColumnFiniteOperator::sandwich(const Matrix& k) const {
  Matrix m = apply(k);
  if (!m.cols().same_layout(cols_)) throw MatError("sandwich: shape mismatch");
  Matrix out(rows_, rows_, ring_);
  std::map<Pos, std::vector<std::pair<Pos, Scalar>>> cache;
  for (const auto& [key, v] : m.fin()) {
    auto it = cache.find(key.col());
    if (it == cache.end()) it = cache.emplace(key.col(), column(key.col())).first;
    for (const auto& [r, cv] : it->second) out.add_entry(key.row(), r, v * transpose_entry(cv));
  }
  return out;
}

Scalar ColumnFiniteOperator::gram(const Pos& i, const Pos& j) const {
  Scalar v = ring_.zero();
  auto ci = column(i), cj = column(j);
  for (const auto& [p, x] : ci)
    for (const auto& [q, y] : cj)
      if (p == q) v += transpose_entry(x) * y;
  return v;
}

}  // namespace vgrass
