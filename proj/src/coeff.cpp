// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include "vgrass/coeff.hpp"

#include <cmath>
#include <sstream>

namespace vgrass {

namespace {

void trim_vec(std::vector<mpq_class>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

std::vector<mpq_class> padd(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
  std::vector<mpq_class> r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim_vec(r);
  return r;
}

std::vector<mpq_class> pmul(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<mpq_class> r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim_vec(r);
  return r;
}

// multiply by (1 - s^2)
std::vector<mpq_class> one_minus_s2(const std::vector<mpq_class>& a) {
  std::vector<mpq_class> r(a.size() + 2);
  for (size_t i = 0; i < a.size(); ++i) {
    r[i] += a[i];
    r[i + 2] -= a[i];
  }
  trim_vec(r);
  return r;
}

std::string poly_s_string(const std::vector<mpq_class>& p) {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    mpq_class c = p[i];
    bool neg = c < 0;
    if (neg) c = -c;
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    first = false;
    bool unit = (c == 1);
    if (!unit || i == 0) os << c.get_str();
    if (i > 0) {
      if (!unit) os << "*";
      os << "s";
      if (i > 1) os << "^" << i;
    }
  }
  return first ? "0" : os.str();
}

const char* kind_name(RingKind k) {
  switch (k) {
    case RingKind::Integers: return "Integers";
    case RingKind::Rationals: return "Rationals";
    case RingKind::TrigQuot: return "TrigQuot";
    case RingKind::FloatTol: return "FloatTol";
    case RingKind::MatrixRing: return "MatrixRing";
  }
  return "?";
}

[[noreturn]] void mismatch(const Scalar& a, const Scalar& b) {
  throw RingError(std::string("scalar kind mismatch: ") + kind_name(a.kind()) + " vs " +
                  kind_name(b.kind()));
}

}  // namespace

void TrigPoly::trim() {
  trim_vec(c);
  trim_vec(ct);
}

TrigPoly TrigPoly::from_bivariate(const std::map<std::pair<int, int>, mpq_class>& terms) {
  TrigPoly r;
  for (const auto& [ij, k] : terms) {
    auto [i, j] = ij;
    if (i < 0 || j < 0) throw RingError("negative exponent in trig polynomial");
    // t^j = (1-s^2)^(j/2) * t^(j%2)
    std::vector<mpq_class> p(i + 1);
    p[i] = k;
    for (int e = 0; e < j / 2; ++e) p = one_minus_s2(p);
    if (j % 2) r.ct = padd(r.ct, p);
    else r.c = padd(r.c, p);
  }
  r.trim();
  return r;
}

TrigPoly TrigPoly::constant(const mpq_class& v) {
  TrigPoly r;
  r.c = {v};
  r.trim();
  return r;
}

TrigPoly TrigPoly::s() {
  TrigPoly r;
  r.c = {0, 1};
  return r;
}

TrigPoly TrigPoly::t() {
  TrigPoly r;
  r.ct = {1};
  return r;
}

double TrigPoly::eval(double s, double t) const {
  double a = 0, b = 0;
  for (size_t i = c.size(); i-- > 0;) a = a * s + c[i].get_d();
  for (size_t i = ct.size(); i-- > 0;) b = b * s + ct[i].get_d();
  return a + t * b;
}

std::string TrigPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  if (!c.empty()) out = poly_s_string(c);
  if (!ct.empty()) {
    std::string q = poly_s_string(ct);
    std::string term = (q == "1") ? "t" : (q == "-1" ? "-t" : "t*(" + q + ")");
    if (out.empty()) out = term;
    else if (term[0] == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out;
}

TrigPoly normalize(const TrigPoly& x) {
  TrigPoly r = x;
  r.trim();
  return r;
}

Scalar::Scalar(Payload p) : p_(std::move(p)) {
  if (auto* q = std::get_if<mpq_class>(&p_)) {
    q->canonicalize();
  } else if (auto* t = std::get_if<TrigPoly>(&p_)) {
    for (auto& x : t->c) x.canonicalize();
    for (auto& x : t->ct) x.canonicalize();
    t->trim();
  }
}

RingKind Scalar::kind() const {
  switch (p_.index()) {
    case 0: return RingKind::Integers;
    case 1: return RingKind::Rationals;
    case 2: return RingKind::TrigQuot;
    case 3: return RingKind::FloatTol;
    default: return RingKind::MatrixRing;
  }
}

bool Scalar::is_zero() const {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MatPayload>) {
          for (const auto& x : v.e)
            if (!x.is_zero()) return false;
          return true;
        } else if constexpr (std::is_same_v<T, TrigPoly>) {
          return v.is_zero();
        } else {
          return v == 0;
        }
      },
      p_);
}

bool Scalar::operator==(const Scalar& o) const {
  if (p_.index() != o.p_.index()) return false;
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        const auto& w = std::get<T>(o.p_);
        if constexpr (std::is_same_v<T, MatPayload>) {
          if (v.n != w.n) return false;
          for (size_t i = 0; i < v.e.size(); ++i)
            if (!(v.e[i] == w.e[i])) return false;
          return true;
        } else {
          return v == w;
        }
      },
      p_);
}

Scalar Scalar::operator-() const {
  return std::visit(
      [](const auto& v) -> Scalar {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MatPayload>) {
          MatPayload r{v.n, {}};
          r.e.reserve(v.e.size());
          for (const auto& x : v.e) r.e.push_back(-x);
          return Scalar(r);
        } else if constexpr (std::is_same_v<T, TrigPoly>) {
          TrigPoly r = v;
          for (auto& x : r.c) x = -x;
          for (auto& x : r.ct) x = -x;
          return Scalar(r);
        } else if constexpr (std::is_same_v<T, mpz_class> || std::is_same_v<T, mpq_class>) {
          return Scalar(T(-v));
        } else {
          return Scalar(-v);
        }
      },
      p_);
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.p_.index() != b.p_.index()) mismatch(a, b);
  return std::visit(
      [&](const auto& v) -> Scalar {
        using T = std::decay_t<decltype(v)>;
        const auto& w = std::get<T>(b.p_);
        if constexpr (std::is_same_v<T, MatPayload>) {
          if (v.n != w.n) throw RingError("matrix scalar size mismatch");
          MatPayload r{v.n, {}};
          r.e.reserve(v.e.size());
          for (size_t i = 0; i < v.e.size(); ++i) r.e.push_back(v.e[i] + w.e[i]);
          return Scalar(r);
        } else if constexpr (std::is_same_v<T, TrigPoly>) {
          TrigPoly r;
          r.c = padd(v.c, w.c);
          r.ct = padd(v.ct, w.ct);
          return Scalar(r);
        } else if constexpr (std::is_same_v<T, mpz_class> || std::is_same_v<T, mpq_class>) {
          return Scalar(T(v + w));
        } else {
          return Scalar(v + w);
        }
      },
      a.p_);
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.p_.index() != b.p_.index()) mismatch(a, b);
  return std::visit(
      [&](const auto& v) -> Scalar {
        using T = std::decay_t<decltype(v)>;
        const auto& w = std::get<T>(b.p_);
        if constexpr (std::is_same_v<T, MatPayload>) {
          if (v.n != w.n) throw RingError("matrix scalar size mismatch");
          int n = v.n;
          MatPayload r{n, {}};
          r.e.reserve(v.e.size());
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              Scalar acc = v.e[i * n] * w.e[j];
              for (int k = 1; k < n; ++k) acc += v.e[i * n + k] * w.e[k * n + j];
              r.e.push_back(std::move(acc));
            }
          return Scalar(r);
        } else if constexpr (std::is_same_v<T, TrigPoly>) {
          TrigPoly r;
          r.c = padd(pmul(v.c, w.c), one_minus_s2(pmul(v.ct, w.ct)));
          r.ct = padd(pmul(v.c, w.ct), pmul(v.ct, w.c));
          return Scalar(r);
        } else if constexpr (std::is_same_v<T, mpz_class> || std::is_same_v<T, mpq_class>) {
          return Scalar(T(v * w));
        } else {
          return Scalar(v * w);
        }
      },
      a.p_);
}

Scalar Scalar::div(const mpq_class& q) const {
  if (q == 0) throw RingError("division by zero");
  return std::visit(
      [&](const auto& v) -> Scalar {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MatPayload>) {
          MatPayload r{v.n, {}};
          for (const auto& x : v.e) r.e.push_back(x.div(q));
          return Scalar(r);
        } else if constexpr (std::is_same_v<T, TrigPoly>) {
          TrigPoly r = v;
          for (auto& x : r.c) x /= q;
          for (auto& x : r.ct) x /= q;
          return Scalar(r);
        } else if constexpr (std::is_same_v<T, mpz_class>) {
          mpq_class r = mpq_class(v) / q;
          if (r.get_den() != 1) throw RingError("inexact integer division");
          return Scalar(mpz_class(r.get_num()));
        } else if constexpr (std::is_same_v<T, mpq_class>) {
          return Scalar(mpq_class(v / q));
        } else {
          return Scalar(v / q.get_d());
        }
      },
      p_);
}

double Scalar::to_double(double s, double t) const {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MatPayload>) {
          throw RingError("matrix scalar has no real value");
        } else if constexpr (std::is_same_v<T, TrigPoly>) {
          return v.eval(s, t);
        } else if constexpr (std::is_same_v<T, double>) {
          return v;
        } else {
          return v.get_d();
        }
      },
      p_);
}

Scalar Scalar::evaluated(double s, double t) const {
  if (auto* m = std::get_if<MatPayload>(&p_)) {
    MatPayload r{m->n, {}};
    for (const auto& x : m->e) r.e.push_back(x.evaluated(s, t));
    return Scalar(r);
  }
  return Scalar(to_double(s, t));
}

std::string Scalar::to_string() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MatPayload>) {
          std::string out = "[";
          for (int i = 0; i < v.n; ++i) {
            out += i ? "; " : "";
            for (int j = 0; j < v.n; ++j) out += (j ? " " : "") + v.e[i * v.n + j].to_string();
          }
          return out + "]";
        } else if constexpr (std::is_same_v<T, TrigPoly>) {
          return v.to_string();
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream os;
          os.precision(17);
          os << v;
          return os.str();
        } else {
          return v.get_str();
        }
      },
      p_);
}

Ring::Ring() : Ring(rationals()) {}

Ring Ring::integers() {
  static auto d = std::make_shared<const Desc>(Desc{RingKind::Integers, 0.0, nullptr, 1, true, false});
  return Ring(d);
}

Ring Ring::rationals() {
  static auto d = std::make_shared<const Desc>(Desc{RingKind::Rationals, 0.0, nullptr, 1, true, false});
  return Ring(d);
}

Ring Ring::trig() {
  static auto d = std::make_shared<const Desc>(Desc{RingKind::TrigQuot, 0.0, nullptr, 1, true, false});
  return Ring(d);
}

Ring Ring::floats(double tolerance) {
  if (!(tolerance >= 0)) throw RingError("tolerance must be nonnegative");
  return Ring(std::make_shared<const Desc>(Desc{RingKind::FloatTol, tolerance, nullptr, 1, true, true}));
}

Ring Ring::matrix(const Ring& base, int n) {
  if (n < 1) throw RingError("matrix ring size must be positive");
  if (base.kind() == RingKind::MatrixRing && base.base().kind() == RingKind::MatrixRing)
    throw RingError("matrix ring nesting deeper than 2 is not supported");
  return Ring(std::make_shared<const Desc>(
      Desc{RingKind::MatrixRing, base.tolerance(), base.d_, n, base.strong(), base.norm_strong()}));
}

Ring Ring::base() const {
  if (!d_->base) throw RingError("ring has no base");
  return Ring(d_->base);
}

bool Ring::commutative() const { return d_->kind != RingKind::MatrixRing || (d_->size == 1 && base().commutative()); }

bool Ring::exact() const {
  if (d_->kind == RingKind::MatrixRing) return base().exact();
  return d_->kind != RingKind::FloatTol;
}

Scalar Ring::zero() const { return from_int(0); }
Scalar Ring::one() const { return from_int(1); }

Scalar Ring::from_int(long long v) const { return from_rational(mpq_class(mpz_class(std::to_string(v)))); }

Scalar Ring::from_rational(const mpq_class& v) const {
  switch (d_->kind) {
    case RingKind::Integers:
      if (v.get_den() != 1) throw RingError("non-integer value in Integers");
      return Scalar(mpz_class(v.get_num()));
    case RingKind::Rationals: return Scalar(v);
    case RingKind::TrigQuot: return Scalar(TrigPoly::constant(v));
    case RingKind::FloatTol: return Scalar(v.get_d());
    case RingKind::MatrixRing: {
      Ring b = base();
      MatPayload m{d_->size, {}};
      for (int i = 0; i < d_->size; ++i)
        for (int j = 0; j < d_->size; ++j) m.e.push_back(i == j ? b.from_rational(v) : b.zero());
      return Scalar(m);
    }
  }
  throw RingError("unknown ring");
}

Scalar Ring::from_double(double v) const {
  if (d_->kind == RingKind::FloatTol) return Scalar(v);
  if (d_->kind == RingKind::MatrixRing) {
    Ring b = base();
    MatPayload m{d_->size, {}};
    for (int i = 0; i < d_->size; ++i)
      for (int j = 0; j < d_->size; ++j) m.e.push_back(i == j ? b.from_double(v) : b.zero());
    return Scalar(m);
  }
  return from_rational(mpq_class(v));
}

Scalar Ring::s() const {
  if (d_->kind != RingKind::TrigQuot) throw RingError("s is only defined in TrigQuot");
  return Scalar(TrigPoly::s());
}

Scalar Ring::t() const {
  if (d_->kind != RingKind::TrigQuot) throw RingError("t is only defined in TrigQuot");
  return Scalar(TrigPoly::t());
}

bool Ring::contains(const Scalar& x) const {
  if (x.kind() != d_->kind) return false;
  if (d_->kind != RingKind::MatrixRing) return true;
  const auto& m = std::get<MatPayload>(x.payload());
  if (m.n != d_->size) return false;
  Ring b = base();
  for (const auto& e : m.e)
    if (!b.contains(e)) return false;
  return true;
}

bool Ring::eq(const Scalar& x, const Scalar& y) const {
  if (!contains(x) || !contains(y)) throw RingError("approx_eq: scalar not in ring " + name());
  if (d_->kind == RingKind::FloatTol)
    return std::fabs(std::get<double>(x.payload()) - std::get<double>(y.payload())) <= d_->tolerance;
  if (d_->kind == RingKind::MatrixRing) {
    const auto& a = std::get<MatPayload>(x.payload());
    const auto& b = std::get<MatPayload>(y.payload());
    Ring br = base();
    for (size_t i = 0; i < a.e.size(); ++i)
      if (!br.eq(a.e[i], b.e[i])) return false;
    return true;
  }
  return x == y;
}

bool Ring::near_zero(const Scalar& x) const { return eq(x, zero()); }

bool Ring::operator==(const Ring& o) const {
  if (d_ == o.d_) return true;
  if (d_->kind != o.d_->kind || d_->size != o.d_->size) return false;
  if (d_->kind == RingKind::FloatTol) return d_->tolerance == o.d_->tolerance;
  if (d_->kind == RingKind::MatrixRing) return base() == o.base();
  return true;
}

std::string Ring::name() const {
  switch (d_->kind) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::TrigQuot: return "Q[s,t]/(s^2+t^2-1)";
    case RingKind::FloatTol: {
      std::ostringstream os;
      os << "Float(tol=" << d_->tolerance << ")";
      return os.str();
    }
    case RingKind::MatrixRing: return "Mat" + std::to_string(d_->size) + "(" + base().name() + ")";
  }
  return "?";
}

}  // namespace vgrass
