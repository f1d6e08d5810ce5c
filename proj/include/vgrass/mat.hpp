// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vgrass/coeff.hpp"
#include "vgrass/shape.hpp"

namespace vgrass {

// Laurent polynomial sum_d f[d] z^d; z^d is the constant diagonal row - col = d.
using Laurent = std::map<long long, Scalar>;

struct FinKey {
  int rs;
  long long rp;
  int cs;
  long long cp;
  auto operator<=>(const FinKey&) const = default;
  Pos row() const { return {rs, rp}; }
  Pos col() const { return {cs, cp}; }
};

class MatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Toeplitz-plus-finite matrix over (rows, cols). Entry(i,j) = symbol(rs,cs)[ip - jp] + fin(i,j).
// Symbols live only on blocks between two tails of the same kind. The identity is the symbol 1 on
// every tail diagonal block plus unit entries on points. Zero coefficients are never stored, so
// structural equality is equality of operators.
class Matrix {
 public:
  using SymbolMap = std::map<std::pair<int, int>, Laurent>;
  using FinMap = std::map<FinKey, Scalar>;

  Matrix() = default;
  Matrix(IndexSet rows, IndexSet cols, Ring ring);

  static Matrix zero(const IndexSet& rows, const IndexSet& cols, const Ring& ring);
  static Matrix identity(const IndexSet& set, const Ring& ring);
  static Matrix scalar(const IndexSet& set, const Scalar& lambda, const Ring& ring);
  // e_{r,c} * v
  static Matrix unit(const IndexSet& rows, const IndexSet& cols, const Ring& ring, Pos r, Pos c, const Scalar& v);
  // z^d on the (rs, cs) block (both tails of one kind).
  static Matrix shift(const IndexSet& rows, const IndexSet& cols, const Ring& ring, int rs, int cs, long long d);

  const IndexSet& rows() const { return rows_; }
  const IndexSet& cols() const { return cols_; }
  const Ring& ring() const { return ring_; }
  const SymbolMap& symbols() const { return sym_; }
  const FinMap& fin() const { return fin_; }

  void add_symbol(int rs, int cs, long long d, const Scalar& v);
  void add_entry(Pos r, Pos c, const Scalar& v);
  Scalar entry(Pos r, Pos c) const;
  Laurent symbol(int rs, int cs) const;

  bool is_K() const { return sym_.empty(); }
  bool is_zero() const { return sym_.empty() && fin_.empty(); }
  bool is_square() const { return rows_.same_layout(cols_); }

  // Largest |d| over all symbol coefficients.
  long long bandwidth() const;
  // Largest |position| appearing in the finite part.
  long long support_radius() const;

  Matrix operator-() const;
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Scalar& s, const Matrix& a);
  friend Matrix operator*(const Matrix& a, const Scalar& s);
  Matrix& operator+=(const Matrix& b) { return *this = *this + b; }
  Matrix& operator-=(const Matrix& b) { return *this = *this - b; }

  Matrix transpose() const;
  // Structural equality (exact); shapes compared by layout.
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  // Same entries over relabeled but layout-identical index sets.
  Matrix with_shape(const IndexSet& rows, const IndexSet& cols) const;
  // Entrywise image under f, possibly into another ring.
  Matrix map(const Ring& ring, const std::function<Scalar(const Scalar&)>& f) const;

  std::string to_string() const;

 private:
  void prune();
  IndexSet rows_, cols_;
  Ring ring_;
  SymbolMap sym_;
  FinMap fin_;
};

// Ring-aware equality: exact rings structural, FloatTol entrywise within tolerance.
bool equal(const Matrix& a, const Matrix& b);
// a ~ b: the difference is finitely supported.
bool approx_equiv(const Matrix& a, const Matrix& b);
bool is_idempotent(const Matrix& a);
Scalar finite_trace(const Matrix& a);
Matrix complement(const Matrix& a);  // 1 - a
Matrix kronecker(const Matrix& a, const Matrix& b);
// Kronecker product for any ring when the entries of a are integer multiples of one.
Matrix kronecker_central(const Matrix& a, const Matrix& b);
Matrix direct_sum(const Matrix& a, const Matrix& b);
Matrix direct_sum(const std::vector<Matrix>& parts);
// Block matrix from a grid; the grid's row blocks tile `rows` strand by strand (same for cols).
Matrix assemble(const IndexSet& rows, const IndexSet& cols, const std::vector<std::vector<Matrix>>& grid);
// Sub-matrix on strand ranges [r0, r0+rows.strand_count()) x [c0, c0+cols.strand_count()).
Matrix extract(const Matrix& a, int r0, int c0, const IndexSet& rows, const IndexSet& cols);

// The 0/1 matrix of a relabeling, shape target x source.
Matrix relabel_matrix(const Relabeling& r, const Ring& ring);
// r_* A = r A r^T.
Matrix push_forward(const Relabeling& r, const Matrix& a);

// Conjugation by a tail split (exact on both symbols and finite parts).
Matrix split_forward(const Matrix& a, const TailSplit& rows, const TailSplit& cols);
// Inverse transport; fails unless the split symbols come from constant diagonals.
Matrix split_backward(const Matrix& a, const TailSplit& rows, const TailSplit& cols);

// Dense view on a finite window: TailN positions 0..n-1, TailZ positions -n..n-1.
struct Window {
  std::vector<Pos> rows, cols;
  std::vector<Scalar> e;  // row-major
  const Scalar& at(size_t i, size_t j) const { return e[i * cols.size() + j]; }
};
std::vector<Pos> window_positions(const IndexSet& set, long long n);
Window window(const Matrix& a, long long nrows, long long ncols);
Window window_product(const Window& a, const Window& b, const Ring& ring);

// Substitute (s,t) into every TrigQuot entry, giving a FloatTol matrix.
Matrix evaluate(const Matrix& a, double s, double t, double tolerance = 1e-9);

// Operator with finitely supported columns (rows may be unbounded).
class ColumnFiniteOperator {
 public:
  using Column = std::function<std::vector<std::pair<Pos, Scalar>>(const Pos&)>;
  ColumnFiniteOperator(IndexSet rows, IndexSet cols, Ring ring, Column column);

  const IndexSet& rows() const { return rows_; }
  const IndexSet& cols() const { return cols_; }
  const Ring& ring() const { return ring_; }
  std::vector<std::pair<Pos, Scalar>> column(const Pos& c) const;
  Scalar entry(const Pos& r, const Pos& c) const;

  // C K for finitely supported K.
  Matrix apply(const Matrix& k) const;
  // C K C^T for finitely supported K.
  Matrix sandwich(const Matrix& k) const;
  // (C^T C)(i,j) as a finite sum.
  Scalar gram(const Pos& i, const Pos& j) const;

 private:
  IndexSet rows_, cols_;
  Ring ring_;
  Column column_;
};

}  // namespace vgrass
