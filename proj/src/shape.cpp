// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include "vgrass/shape.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace vgrass {

namespace {

long long floor_div(long long a, long long k) { return a >= 0 ? a / k : -((-a + k - 1) / k); }
long long floor_mod(long long a, long long k) { return a - k * floor_div(a, k); }

}  // namespace

std::string atom_string(const Atom& a) {
  if (auto* v = std::get_if<long long>(&a)) return std::to_string(*v);
  return std::get<std::string>(a);
}

IndexSet::IndexSet() : IndexSet(finite({})) {}

IndexSet IndexSet::make(NodeData d) {
  switch (d.node) {
    case Node::Finite:
      d.strands.assign(d.labels.size(), Strand{StrandKind::Point, ""});
      break;
    case Node::TailN: d.strands = {Strand{StrandKind::TailN, d.tag}}; break;
    case Node::TailZ: d.strands = {Strand{StrandKind::TailZ, d.tag}}; break;
    case Node::Union:
      d.strands = d.l->strands;
      d.strands.insert(d.strands.end(), d.r->strands.begin(), d.r->strands.end());
      break;
    case Node::Product:
      for (const auto& a : d.l->strands)
        for (const auto& b : d.r->strands) d.strands.push_back(a.kind == StrandKind::Point ? b : a);
      break;
  }
  return IndexSet(std::make_shared<const NodeData>(std::move(d)));
}

IndexSet IndexSet::finite(std::vector<Atom> labels) {
  NodeData d;
  d.node = Node::Finite;
  d.labels = std::move(labels);
  return make(std::move(d));
}

IndexSet IndexSet::range(int k) {
  std::vector<Atom> l;
  for (int i = 0; i < k; ++i) l.emplace_back(static_cast<long long>(i));
  return finite(std::move(l));
}

IndexSet IndexSet::tail_n(std::string tag) {
  NodeData d;
  d.node = Node::TailN;
  d.tag = std::move(tag);
  return make(std::move(d));
}

IndexSet IndexSet::tail_z(std::string tag) {
  NodeData d;
  d.node = Node::TailZ;
  d.tag = std::move(tag);
  return make(std::move(d));
}

IndexSet IndexSet::left() const {
  if (!n_->l) throw ShapeError("index set has no left child");
  return IndexSet(n_->l);
}

IndexSet IndexSet::right() const {
  if (!n_->r) throw ShapeError("index set has no right child");
  return IndexSet(n_->r);
}

Card IndexSet::cardinality() const {
  switch (n_->node) {
    case Node::Finite: return {false, static_cast<long long>(n_->labels.size())};
    case Node::TailN:
    case Node::TailZ: return {true, 0};
    case Node::Union: {
      Card a = left().cardinality(), b = right().cardinality();
      if (a.omega || b.omega) return {true, 0};
      return {false, a.n + b.n};
    }
    case Node::Product: {
      Card a = left().cardinality(), b = right().cardinality();
      if ((!a.omega && a.n == 0) || (!b.omega && b.n == 0)) return {false, 0};
      if (a.omega || b.omega) return {true, 0};
      return {false, a.n * b.n};
    }
  }
  return {};
}

std::vector<std::string> IndexSet::tags() const {
  std::vector<std::string> out;
  std::function<void(const NodeData&)> walk = [&](const NodeData& d) {
    if (d.node == Node::TailN || d.node == Node::TailZ) out.push_back(d.tag);
    if (d.l) walk(*d.l);
    if (d.r) walk(*d.r);
  };
  walk(*n_);
  return out;
}

bool IndexSet::operator==(const IndexSet& o) const {
  if (n_ == o.n_) return true;
  if (n_->node != o.n_->node) return false;
  switch (n_->node) {
    case Node::Finite: return n_->labels == o.n_->labels;
    case Node::TailN:
    case Node::TailZ: return n_->tag == o.n_->tag;
    default: return left() == o.left() && right() == o.right();
  }
}

bool IndexSet::same_layout(const IndexSet& o) const {
  if (strand_count() != o.strand_count()) return false;
  for (int i = 0; i < strand_count(); ++i)
    if (n_->strands[i].kind != o.n_->strands[i].kind) return false;
  return true;
}

std::string IndexSet::to_string() const {
  switch (n_->node) {
    case Node::Finite: {
      std::string s = "{";
      for (size_t i = 0; i < n_->labels.size(); ++i) s += (i ? "," : "") + atom_string(n_->labels[i]);
      return s + "}";
    }
    case Node::TailN: return "N[" + n_->tag + "]";
    case Node::TailZ: return "Z[" + n_->tag + "]";
    case Node::Union: return "(" + left().to_string() + " u " + right().to_string() + ")";
    case Node::Product: return "(" + left().to_string() + " x " + right().to_string() + ")";
  }
  return "?";
}

bool IndexSet::valid_pos(const Pos& p) const {
  if (p.strand < 0 || p.strand >= strand_count()) return false;
  switch (n_->strands[p.strand].kind) {
    case StrandKind::Point: return p.pos == 0;
    case StrandKind::TailN: return p.pos >= 0;
    case StrandKind::TailZ: return true;
  }
  return false;
}

IndexSet retag(const IndexSet& a, const std::function<std::string(const std::string&)>& f) {
  IndexSet::NodeData d;
  d.node = a.node();
  switch (a.node()) {
    case IndexSet::Node::Finite: return a;
    case IndexSet::Node::TailN:
    case IndexSet::Node::TailZ: d.tag = f(a.tag()); break;
    default:
      d.l = retag(a.left(), f).n_;
      d.r = retag(a.right(), f).n_;
  }
  return IndexSet::make(std::move(d));
}

IndexSet unite(const IndexSet& a, const IndexSet& b) {
  auto at = a.tags();
  std::set<std::string> used(at.begin(), at.end());
  IndexSet bb = retag(b, [&](const std::string& t) {
    std::string s = t;
    while (used.count(s)) s += "'";
    return s;
  });
  IndexSet::NodeData d;
  d.node = IndexSet::Node::Union;
  d.l = a.n_;
  d.r = bb.n_;
  return IndexSet::make(std::move(d));
}

IndexSet unite(const std::vector<IndexSet>& parts) {
  if (parts.empty()) return IndexSet();
  IndexSet acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) acc = unite(parts[i], acc);
  return acc;
}

IndexSet product(const IndexSet& a, const IndexSet& b) {
  if (!a.is_finite() && !b.is_finite())
    throw ShapeError("product of two infinite index sets is not supported: " + a.to_string() + " x " +
                     b.to_string() + " (one factor must be finite)");
  IndexSet::NodeData d;
  d.node = IndexSet::Node::Product;
  d.l = a.n_;
  d.r = b.n_;
  return IndexSet::make(std::move(d));
}

IndexSet blocks(const std::vector<Atom>& labels, const IndexSet& omega) {
  return product(IndexSet::finite(labels), omega);
}

IndexSet blocks(int k, const IndexSet& omega) { return product(IndexSet::range(k), omega); }

bool Index::operator==(const Index& o) const {
  return kind == o.kind && pos == o.pos && sub == o.sub;
}

std::string Index::to_string() const {
  switch (kind) {
    case Kind::At: return std::to_string(pos);
    case Kind::Left: return "L." + sub[0].to_string();
    case Kind::Right: return "R." + sub[0].to_string();
    case Kind::Pair: return "(" + sub[0].to_string() + "," + sub[1].to_string() + ")";
  }
  return "?";
}

Pos locate(const IndexSet& set, const Index& idx) {
  using N = IndexSet::Node;
  switch (set.node()) {
    case N::Finite:
      if (idx.kind != Index::Kind::At || idx.pos < 0 || idx.pos >= static_cast<long long>(set.labels().size()))
        throw ShapeError("bad index " + idx.to_string() + " into " + set.to_string());
      return {static_cast<int>(idx.pos), 0};
    case N::TailN:
      if (idx.kind != Index::Kind::At || idx.pos < 0)
        throw ShapeError("bad index " + idx.to_string() + " into " + set.to_string());
      return {0, idx.pos};
    case N::TailZ:
      if (idx.kind != Index::Kind::At) throw ShapeError("bad index " + idx.to_string() + " into " + set.to_string());
      return {0, idx.pos};
    case N::Union:
      if (idx.kind == Index::Kind::Left) return locate(set.left(), idx.sub[0]);
      if (idx.kind == Index::Kind::Right) {
        Pos p = locate(set.right(), idx.sub[0]);
        p.strand += set.left().strand_count();
        return p;
      }
      throw ShapeError("bad index " + idx.to_string() + " into " + set.to_string());
    case N::Product: {
      if (idx.kind != Index::Kind::Pair) throw ShapeError("bad index " + idx.to_string() + " into " + set.to_string());
      Pos a = locate(set.left(), idx.sub[0]);
      Pos b = locate(set.right(), idx.sub[1]);
      int nb = set.right().strand_count();
      return {a.strand * nb + b.strand, set.left().is_tail(a.strand) ? a.pos : b.pos};
    }
  }
  throw ShapeError("bad index set");
}

Index index_at(const IndexSet& set, const Pos& p) {
  using N = IndexSet::Node;
  if (!set.valid_pos(p)) throw ShapeError("position out of range in " + set.to_string());
  switch (set.node()) {
    case N::Finite: return Index::at(p.strand);
    case N::TailN:
    case N::TailZ: return Index::at(p.pos);
    case N::Union: {
      int nl = set.left().strand_count();
      if (p.strand < nl) return Index::left(index_at(set.left(), p));
      return Index::right(index_at(set.right(), {p.strand - nl, p.pos}));
    }
    case N::Product: {
      int nb = set.right().strand_count();
      int sa = p.strand / nb, sb = p.strand % nb;
      bool ta = set.left().is_tail(sa);
      return Index::pair(index_at(set.left(), {sa, ta ? p.pos : 0}), index_at(set.right(), {sb, ta ? 0 : p.pos}));
    }
  }
  throw ShapeError("bad index set");
}

Pos Relabeling::apply(const Pos& p) const {
  if (!src_.valid_pos(p)) throw ShapeError("relabeling applied outside its source");
  const Image& im = img_[p.strand];
  return {im.strand, p.pos + im.offset};
}

void Relabeling::check() const {
  if (static_cast<int>(img_.size()) != src_.strand_count()) throw ShapeError("relabeling: image table size");
  std::set<Pos> points;
  std::map<int, long long> tails;  // target strand -> lowest covered position
  for (int s = 0; s < src_.strand_count(); ++s) {
    const Image& im = img_[s];
    if (im.strand < 0 || im.strand >= dst_.strand_count()) throw ShapeError("relabeling: target strand out of range");
    StrandKind sk = src_.strands()[s].kind, tk = dst_.strands()[im.strand].kind;
    if (sk == StrandKind::Point) {
      Pos q{im.strand, im.offset};
      if (!dst_.valid_pos(q)) throw ShapeError("relabeling: point image out of range");
      if (!points.insert(q).second) throw ShapeError("relabeling is not injective");
    } else {
      if (sk != tk) throw ShapeError("relabeling: tail kind mismatch");
      if (sk == StrandKind::TailN && im.offset < 0) throw ShapeError("relabeling: negative offset on N-tail");
      if (tails.count(im.strand)) throw ShapeError("relabeling is not injective (two tails on one strand)");
      tails[im.strand] = sk == StrandKind::TailZ ? std::numeric_limits<long long>::min() : im.offset;
    }
  }
  for (const auto& q : points) {
    auto it = tails.find(q.strand);
    if (it != tails.end() && q.pos >= it->second) throw ShapeError("relabeling is not injective (point inside tail)");
  }
}

Relabeling Relabeling::from_images(Kind kind, const IndexSet& src, const IndexSet& dst, std::vector<Image> img) {
  Relabeling r;
  r.kind_ = kind;
  r.src_ = src;
  r.dst_ = dst;
  r.img_ = std::move(img);
  r.check();
  return r;
}

Relabeling Relabeling::reshape(const IndexSet& src, const IndexSet& dst) {
  if (!src.same_layout(dst)) throw ShapeError("reshape between different layouts");
  std::vector<Image> img;
  for (int s = 0; s < src.strand_count(); ++s) img.push_back({s, 0});
  return from_images(Kind::TreeIso, src, dst, std::move(img));
}

Relabeling Relabeling::tree_iso(const IndexSet& src, const IndexSet& dst,
                                const std::function<Index(const Index&)>& f) {
  if (src.strand_count() != dst.strand_count()) throw ShapeError("tree_iso: strand counts differ");
  std::vector<Image> img;
  for (int s = 0; s < src.strand_count(); ++s) {
    Pos q = locate(dst, f(index_at(src, {s, 0})));
    if (q.pos != 0) throw ShapeError("tree_iso must map tails onto tails without offset");
    img.push_back({q.strand, 0});
  }
  return from_images(Kind::TreeIso, src, dst, std::move(img));
}

Relabeling Relabeling::commute(const IndexSet& src) {
  using N = IndexSet::Node;
  if (src.node() == N::Product) {
    IndexSet dst = product(src.right(), src.left());
    return tree_iso(src, dst, [](const Index& i) { return Index::pair(i.sub[1], i.sub[0]); });
  }
  if (src.node() == N::Union) {
    IndexSet dst = unite(src.right(), src.left());
    return tree_iso(src, dst, [](const Index& i) {
      return i.kind == Index::Kind::Left ? Index::right(i.sub[0]) : Index::left(i.sub[0]);
    });
  }
  throw ShapeError("commute needs a union or product at the root");
}

Relabeling Relabeling::tail_embed(const IndexSet& tail, int stride, long long offset) {
  if (tail.node() != IndexSet::Node::TailN && tail.node() != IndexSet::Node::TailZ)
    throw ShapeError("tail_embed needs a tail");
  if (stride < 1) throw ShapeError("tail_embed stride must be positive");
  if (stride == 1) return from_images(Kind::TailEmbed, tail, tail, {{0, offset}});
  TailSplit sp = split_tails(tail, stride);
  long long r = floor_mod(offset, stride), q = floor_div(offset, stride);
  return from_images(Kind::TailEmbed, tail, sp.target, {{static_cast<int>(r), q}});
}

Relabeling Relabeling::finite_map(const IndexSet& src, const IndexSet& dst,
                                  const std::vector<std::pair<long long, Pos>>& table) {
  if (!src.is_finite()) throw ShapeError("finite_map needs a finite source");
  std::vector<Image> img(src.strand_count(), Image{-1, 0});
  for (const auto& [s, q] : table) {
    if (s < 0 || s >= src.strand_count()) throw ShapeError("finite_map: source out of range");
    img[s] = {q.strand, q.pos};
  }
  for (const auto& im : img)
    if (im.strand < 0) throw ShapeError("finite_map must be total");
  return from_images(Kind::FiniteMap, src, dst, std::move(img));
}

namespace {

// Rewrites a path of `set` into the corresponding path of the tail-split set.
Index split_index(const IndexSet& set, const Index& idx, int k) {
  using N = IndexSet::Node;
  switch (set.node()) {
    case N::Finite: return idx;
    case N::TailN:
    case N::TailZ: return Index::pair(Index::at(floor_mod(idx.pos, k)), Index::at(floor_div(idx.pos, k)));
    case N::Union:
      if (idx.kind == Index::Kind::Left) return Index::left(split_index(set.left(), idx.sub[0], k));
      return Index::right(split_index(set.right(), idx.sub[0], k));
    case N::Product:
      return Index::pair(split_index(set.left(), idx.sub[0], k), split_index(set.right(), idx.sub[1], k));
  }
  return idx;
}

IndexSet split_set(const IndexSet& set, int k) {
  using N = IndexSet::Node;
  switch (set.node()) {
    case N::Finite: return set;
    case N::TailN:
    case N::TailZ: return product(IndexSet::range(k), set);
    case N::Union: return unite(split_set(set.left(), k), split_set(set.right(), k));
    case N::Product: return product(split_set(set.left(), k), split_set(set.right(), k));
  }
  return set;
}

}  // namespace

TailSplit split_tails(const IndexSet& set, int k) {
  if (k < 2) throw ShapeError("split factor must be at least 2");
  TailSplit sp;
  sp.source = set;
  sp.k = k;
  sp.target = split_set(set, k);
  for (int s = 0; s < set.strand_count(); ++s) {
    long long p0 = 0;
    sp.first.push_back(locate(sp.target, split_index(set, index_at(set, {s, p0}), k)).strand);
    if (set.is_tail(s)) {
      for (int i = 1; i < k; ++i)
        if (locate(sp.target, split_index(set, index_at(set, {s, i}), k)).strand != sp.first.back() + i)
          throw ShapeError("split_tails: residue strands are not contiguous");
    }
  }
  return sp;
}

Pos TailSplit::forward(const Pos& p) const {
  if (!source.is_tail(p.strand)) return {first[p.strand], 0};
  return {first[p.strand] + static_cast<int>(floor_mod(p.pos, k)), floor_div(p.pos, k)};
}

Pos TailSplit::backward(const Pos& p) const {
  auto it = std::upper_bound(first.begin(), first.end(), p.strand);
  int s = static_cast<int>(it - first.begin()) - 1;
  if (!source.is_tail(s)) return {s, 0};
  return {s, p.pos * k + (p.strand - first[s])};
}

}  // namespace vgrass
