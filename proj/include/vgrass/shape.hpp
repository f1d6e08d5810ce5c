// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace vgrass {

using Atom = std::variant<long long, std::string>;
std::string atom_string(const Atom& a);

enum class StrandKind { Point, TailN, TailZ };

// An index set is flattened into strands: single points and whole tails.
// Union concatenates strand lists; Product pairs strands lexicographically.
struct Strand {
  StrandKind kind;
  std::string tag;
};

// A position inside a flattened index set.
struct Pos {
  int strand = 0;
  long long pos = 0;
  auto operator<=>(const Pos&) const = default;
};

struct Card {
  bool omega = false;
  long long n = 0;
  bool operator==(const Card&) const = default;
};

class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexSet {
 public:
  enum class Node { Finite, TailN, TailZ, Union, Product };

  IndexSet();  // empty finite set
  static IndexSet finite(std::vector<Atom> labels);
  static IndexSet range(int k);  // Finite{0..k-1}
  static IndexSet tail_n(std::string tag);
  static IndexSet tail_z(std::string tag);

  Node node() const { return n_->node; }
  const std::vector<Atom>& labels() const { return n_->labels; }
  const std::string& tag() const { return n_->tag; }
  IndexSet left() const;
  IndexSet right() const;

  const std::vector<Strand>& strands() const { return n_->strands; }
  int strand_count() const { return static_cast<int>(n_->strands.size()); }
  bool is_tail(int s) const { return n_->strands[s].kind != StrandKind::Point; }
  Card cardinality() const;
  bool is_finite() const { return !cardinality().omega; }
  std::vector<std::string> tags() const;

  bool operator==(const IndexSet& o) const;
  bool operator!=(const IndexSet& o) const { return !(*this == o); }
  // Same strand kinds in the same order; matrices over such sets are interchangeable.
  bool same_layout(const IndexSet& o) const;
  std::string to_string() const;

  bool valid_pos(const Pos& p) const;

 private:
  struct NodeData {
    Node node = Node::Finite;
    std::vector<Atom> labels;
    std::string tag;
    std::shared_ptr<const NodeData> l, r;
    std::vector<Strand> strands;
  };
  explicit IndexSet(std::shared_ptr<const NodeData> n) : n_(std::move(n)) {}
  static IndexSet make(NodeData d);
  std::shared_ptr<const NodeData> n_;

  friend IndexSet unite(const IndexSet& a, const IndexSet& b);
  friend IndexSet product(const IndexSet& a, const IndexSet& b);
  friend IndexSet retag(const IndexSet& a, const std::function<std::string(const std::string&)>& f);
};

// Disjoint union; colliding tags on the right are made fresh by priming.
IndexSet unite(const IndexSet& a, const IndexSet& b);
IndexSet unite(const std::vector<IndexSet>& parts);
// Cartesian product; at least one factor must be finite.
IndexSet product(const IndexSet& a, const IndexSet& b);
IndexSet retag(const IndexSet& a, const std::function<std::string(const std::string&)>& f);
// Product(Finite{labels}, omega), the block index sets {0,1}xOmega etc.
IndexSet blocks(const std::vector<Atom>& labels, const IndexSet& omega);
IndexSet blocks(int k, const IndexSet& omega);

// Path to one point of an index set.
struct Index {
  enum class Kind { Left, Right, At, Pair };
  Kind kind = Kind::At;
  long long pos = 0;
  std::vector<Index> sub;

  static Index at(long long p) { return Index{Kind::At, p, {}}; }
  static Index left(Index i) { return Index{Kind::Left, 0, {std::move(i)}}; }
  static Index right(Index i) { return Index{Kind::Right, 0, {std::move(i)}}; }
  static Index pair(Index i, Index j) { return Index{Kind::Pair, 0, {std::move(i), std::move(j)}}; }
  bool operator==(const Index& o) const;
  std::string to_string() const;
};

Pos locate(const IndexSet& set, const Index& idx);
Index index_at(const IndexSet& set, const Pos& p);

// Injective relabeling r: source -> target. Each source strand lands on one target strand
// (tails at a fixed offset, points at a fixed position).
class Relabeling {
 public:
  enum class Kind { TreeIso, TailEmbed, FiniteMap };
  struct Image {
    int strand;
    long long offset;
  };

  Kind kind() const { return kind_; }
  const IndexSet& source() const { return src_; }
  // For TailEmbed with stride k > 1 this is the target with its tail split into k residue strands.
  const IndexSet& target() const { return dst_; }
  const std::vector<Image>& images() const { return img_; }
  Pos apply(const Pos& p) const;

  // Same layout, identity on strands.
  static Relabeling reshape(const IndexSet& src, const IndexSet& dst);
  // Structural isomorphism given by a map on paths; tails must map to tails with offset 0.
  static Relabeling tree_iso(const IndexSet& src, const IndexSet& dst,
                             const std::function<Index(const Index&)>& f);
  // a x b -> b x a and a u b -> b u a.
  static Relabeling commute(const IndexSet& src);
  // n -> k n + r on a single tail; the target is split into k residue classes.
  static Relabeling tail_embed(const IndexSet& tail, int stride, long long offset);
  static Relabeling finite_map(const IndexSet& src, const IndexSet& dst,
                               const std::vector<std::pair<long long, Pos>>& table);
  static Relabeling from_images(Kind kind, const IndexSet& src, const IndexSet& dst, std::vector<Image> img);

 private:
  void check() const;
  Kind kind_ = Kind::TreeIso;
  IndexSet src_, dst_;
  std::vector<Image> img_;
};

// Splits every tail of a set into k residue classes: position n of a tail strand s becomes
// position floor(n/k) of target strand first[s] + (n mod k). Points map to first[s].
struct TailSplit {
  IndexSet source;
  IndexSet target;
  int k = 2;
  std::vector<int> first;  // first target strand of each source strand

  Pos forward(const Pos& p) const;
  Pos backward(const Pos& p) const;
};
TailSplit split_tails(const IndexSet& set, int k);

}  // namespace vgrass
