// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace vgrass {

class Scalar;

// p(s) + t*q(s) modulo s^2 + t^2 = 1. Coefficient vectors carry no trailing zeros.
struct TrigPoly {
  std::vector<mpq_class> c;
  std::vector<mpq_class> ct;

  void trim();
  bool is_zero() const { return c.empty() && ct.empty(); }
  bool operator==(const TrigPoly& o) const { return c == o.c && ct == o.ct; }

  // Reduce an arbitrary polynomial sum_{i,j} k_ij s^i t^j to normal form.
  static TrigPoly from_bivariate(const std::map<std::pair<int, int>, mpq_class>& terms);
  static TrigPoly constant(const mpq_class& v);
  static TrigPoly s();
  static TrigPoly t();

  double eval(double s, double t) const;
  std::string to_string() const;
};

struct MatPayload {
  int n = 0;
  std::vector<Scalar> e;  // row-major n*n
};

enum class RingKind { Integers, Rationals, TrigQuot, FloatTol, MatrixRing };

class Scalar {
 public:
  using Payload = std::variant<mpz_class, mpq_class, TrigPoly, double, MatPayload>;

  Scalar() : p_(mpq_class(0)) {}
  explicit Scalar(Payload p);

  const Payload& payload() const { return p_; }
  RingKind kind() const;

  bool is_zero() const;
  // Structural equality of normal forms (no tolerance).
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }

  // Exact division by a nonzero rational; Integers require divisibility.
  Scalar div(const mpq_class& q) const;

  // Numeric value: FloatTol as is, Integers/Rationals converted, TrigQuot evaluated at (s,t).
  double to_double(double s = 1.0, double t = 0.0) const;
  // Substitute (s,t) into a TrigQuot scalar, giving a double; entrywise for matrix payloads.
  Scalar evaluated(double s, double t) const;

  std::string to_string() const;

 private:
  Payload p_;
};

class Ring {
 public:
  struct Desc {
    RingKind kind = RingKind::Rationals;
    double tolerance = 0.0;
    std::shared_ptr<const Desc> base;
    int size = 1;
    bool strong = true;
    bool norm_strong = false;
  };

  Ring();
  static Ring integers();
  static Ring rationals();
  static Ring trig();
  static Ring floats(double tolerance = 1e-9);
  static Ring matrix(const Ring& base, int n);

  RingKind kind() const { return d_->kind; }
  double tolerance() const { return d_->tolerance; }
  int size() const { return d_->size; }
  Ring base() const;
  bool commutative() const;
  bool exact() const;
  bool strong() const { return d_->strong; }
  bool norm_strong() const { return d_->norm_strong; }
  const Desc& desc() const { return *d_; }

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long long v) const;
  Scalar from_rational(const mpq_class& v) const;
  Scalar from_double(double v) const;
  // Generators of the trig quotient ring.
  Scalar s() const;
  Scalar t() const;

  bool contains(const Scalar& x) const;
  // Exact rings: equality of normal forms. FloatTol: |x - y| <= tolerance.
  bool eq(const Scalar& x, const Scalar& y) const;
  bool near_zero(const Scalar& x) const;

  bool operator==(const Ring& o) const;
  bool operator!=(const Ring& o) const { return !(*this == o); }
  std::string name() const;

 private:
  explicit Ring(std::shared_ptr<const Desc> d) : d_(std::move(d)) {}
  std::shared_ptr<const Desc> d_;
};

inline bool approx_eq(const Ring& r, const Scalar& x, const Scalar& y) { return r.eq(x, y); }
TrigPoly normalize(const TrigPoly& x);

class RingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vgrass
