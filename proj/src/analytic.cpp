// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include "vgrass/analytic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace vgrass {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

constexpr long long kMargin = 4;

// Window positions shared by a family of square matrices. Every tail gets one extra
// representative position past the window that carries its constant diagonal.
struct Layout {
  IndexSet set;
  Ring ring;
  std::vector<Pos> idx;
  std::vector<int> rep;  // strand -> index of its representative, -1 for points
};

void check_tails(const Matrix& a) {
  for (const auto& [key, sym] : a.symbols()) {
    if (key.first != key.second || sym.size() != 1 || sym.begin()->first != 0)
      throw AnalyticError("tails may only carry constant diagonal symbols");
  }
}

Layout layout_of(const std::vector<const Matrix*>& ms) {
  const Matrix& first = *ms.front();
  if (!first.is_square()) throw AnalyticError("expected square matrices");
  long long radius = 0;
  for (const Matrix* m : ms) {
    if (!m->rows().same_layout(first.rows()) || !m->cols().same_layout(first.rows()))
      throw AnalyticError("matrices live on different index sets");
    check_tails(*m);
    radius = std::max(radius, m->support_radius());
  }
  Layout l{first.rows(), first.ring().kind() == RingKind::FloatTol ? first.ring() : Ring::floats(), {}, {}};
  long long n = radius + 1 + kMargin;
  l.idx = window_positions(l.set, n);
  l.rep.assign(l.set.strand_count(), -1);
  for (int s = 0; s < l.set.strand_count(); ++s) {
    if (!l.set.is_tail(s)) continue;
    l.rep[s] = static_cast<int>(l.idx.size());
    l.idx.push_back({s, n});
  }
  return l;
}

MatrixXd dense(const Layout& l, const Matrix& a) {
  if (a.ring().kind() == RingKind::TrigQuot || a.ring().kind() == RingKind::MatrixRing)
    throw AnalyticError("analytic operations need integer, rational or float entries");
  size_t n = l.idx.size();
  MatrixXd m = MatrixXd::Zero(n, n);
  for (const auto& [key, sym] : a.symbols()) {
    double c = sym.begin()->second.to_double();
    for (size_t i = 0; i < n; ++i)
      if (l.idx[i].strand == key.first) m(i, i) = c;
  }
  std::map<Pos, size_t> where;
  for (size_t i = 0; i < n; ++i) where[l.idx[i]] = i;
  for (const auto& [key, v] : a.fin()) m(where.at(key.row()), where.at(key.col())) += v.to_double();
  return m;
}

Matrix sparse(const Layout& l, const MatrixXd& m) {
  size_t n = l.idx.size();
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int s = 0; s < l.set.strand_count(); ++s) {
    int r = l.rep[s];
    if (r < 0) continue;
    for (size_t j = 0; j < n; ++j) {
      if (static_cast<int>(j) == r) continue;
      if (std::abs(m(r, j)) > 1e-9 * scale || std::abs(m(j, r)) > 1e-9 * scale)
        throw AnalyticError("result couples a tail beyond the window");
    }
  }
  Matrix out(l.set, l.set, l.ring);
  std::vector<double> diag(l.set.strand_count(), 0.0);
  for (int s = 0; s < l.set.strand_count(); ++s)
    if (l.rep[s] >= 0) {
      diag[s] = m(l.rep[s], l.rep[s]);
      if (diag[s] != 0.0) out.add_symbol(s, s, 0, l.ring.from_double(diag[s]));
    }
  for (size_t i = 0; i < n; ++i) {
    if (l.rep[l.idx[i].strand] == static_cast<int>(i)) continue;
    for (size_t j = 0; j < n; ++j) {
      if (l.rep[l.idx[j].strand] == static_cast<int>(j)) continue;
      double v = m(i, j);
      if (i == j && l.set.is_tail(l.idx[i].strand)) v -= diag[l.idx[i].strand];
      if (v != 0.0) out.add_entry(l.idx[i], l.idx[j], l.ring.from_double(v));
    }
  }
  return out;
}

double norm2(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  return svd.singularValues()(0);
}

MatrixXd inverse(const MatrixXd& m) {
  Eigen::FullPivLU<MatrixXd> lu(m);
  if (!lu.isInvertible()) throw AnalyticError("matrix is singular on the window");
  return lu.inverse();
}

MatrixXd newton(MatrixXd p) {
  for (int it = 0; it < 60; ++it) {
    MatrixXd p2 = p * p;
    MatrixXd next = 3 * p2 - 2 * p2 * p;
    double step = norm2(next - p);
    p = std::move(next);
    if (step <= 1e-12) break;
  }
  return p;
}

using LaurentM = std::map<int, MatrixXd>;

LaurentM mul(const LaurentM& a, const LaurentM& b) {
  LaurentM out;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) {
      auto [it, fresh] = out.try_emplace(i + j, x * y);
      if (!fresh) it->second += x * y;
    }
  return out;
}

MatrixXd constant_term(const LaurentM& a, long long n) {
  auto it = a.find(0);
  return it == a.end() ? MatrixXd::Zero(n, n) : it->second;
}

// Constant coefficient of (P - eps) z A (1 - eps (z-1) A)^-1 with A = (1-P) + P z^-1, truncated
// so that every power of eps up to the order is kept.
MatrixXd series(const MatrixXd& p, const MatrixXd& eps, int order) {
  long long n = p.rows();
  MatrixXd one = MatrixXd::Identity(n, n);
  LaurentM step{{1, eps * (one - p)}, {0, eps * (2 * p - one)}, {-1, -eps * p}};
  LaurentM head_p{{1, p * (one - p)}, {0, p * p}};
  LaurentM head_e{{1, -eps * (one - p)}, {0, -eps * p}};
  MatrixXd out = constant_term(head_p, n);
  if (order >= 1) out += constant_term(head_e, n);
  for (int k = 1; k <= order; ++k) {
    head_p = mul(head_p, step);
    out += constant_term(head_p, n);
    if (k <= order - 1) {
      head_e = mul(head_e, step);
      out += constant_term(head_e, n);
    }
  }
  return out;
}


}  // namespace

Matrix to_float(const Matrix& a, double tolerance) {
  Ring f = Ring::floats(tolerance);
  if (a.ring().kind() == RingKind::FloatTol && a.ring().tolerance() == tolerance) return a;
  if (a.ring().kind() == RingKind::TrigQuot || a.ring().kind() == RingKind::MatrixRing)
    throw AnalyticError("only integer, rational and float matrices can be carried into floats");
  return a.map(f, [&f](const Scalar& x) { return f.from_double(x.to_double()); });
}

double window_norm(const Matrix& a) {
  Layout l = layout_of({&a});
  return norm2(dense(l, a));
}

Matrix window_inverse(const Matrix& x) {
  Layout l = layout_of({&x});
  return sparse(l, inverse(dense(l, x)));
}

double conjugation_residual(const Matrix& x, const Matrix& p, const Matrix& q) {
  Layout l = layout_of({&x, &p, &q});
  MatrixXd xd = dense(l, x);
  return norm2(xd * dense(l, p) * inverse(xd) - dense(l, q));
}

Matrix transport(const IdempotentPath& path, double t1, double t2) {
  if (!path.sample) throw AnalyticError("path has no sample function");
  if (!(path.step > 0)) throw AnalyticError("step must be positive");
  Matrix a = path.sample(t1), b = path.sample(t2);
  Layout l = layout_of({&a, &b});
  auto deriv = [&](double t) {
    if (path.derivative) return dense(l, path.derivative(t));
    const double h = 1e-5;
    return MatrixXd((dense(l, path.sample(t + h)) - dense(l, path.sample(t - h))) / (2 * h));
  };
  auto gen = [&](double t) {
    MatrixXd p = dense(l, path.sample(t)), dp = deriv(t);
    return MatrixXd(dp * p - p * dp);
  };
  long long steps = std::max<long long>(1, static_cast<long long>(std::ceil(std::abs(t2 - t1) / path.step - 1e-9)));
  double h = (t2 - t1) / static_cast<double>(steps);
  size_t n = l.idx.size();
  MatrixXd x = MatrixXd::Identity(n, n);
  for (long long i = 0; i < steps; ++i) {
    double t = t1 + h * static_cast<double>(i);
    MatrixXd g0 = gen(t), gm = gen(t + h / 2), g1 = gen(t + h);
    MatrixXd k1 = g0 * x;
    MatrixXd k2 = gm * (x + h / 2 * k1);
    MatrixXd k3 = gm * (x + h / 2 * k2);
    MatrixXd k4 = g1 * (x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return sparse(l, x);
}

IdempotentPath rotation_path(double omega, double step) {
  IndexSet two = IndexSet::range(2);
  Ring f = Ring::floats();
  auto build = [two, f](double a, double b, double c, double d) {
    Matrix m(two, two, f);
    m.add_entry({0, 0}, {1, 0}, f.from_double(b));
    m.add_entry({1, 0}, {0, 0}, f.from_double(c));
    m.add_entry({0, 0}, {0, 0}, f.from_double(a));
    m.add_entry({1, 0}, {1, 0}, f.from_double(d));
    return m;
  };
  IdempotentPath p;
  p.step = step;
  p.sample = [omega, build](double t) {
    double c = std::cos(omega * t), s = std::sin(omega * t);
    return build(c * c, c * s, c * s, s * s);
  };
  p.derivative = [omega, build](double t) {
    double c = std::cos(omega * t), s = std::sin(omega * t);
    return build(-2 * omega * c * s, omega * (c * c - s * s), omega * (c * c - s * s), 2 * omega * c * s);
  };
  return p;
}

NearIdempotent NearIdempotent::make(const Matrix& p_tilde, const Matrix& reference) {
  Layout l = layout_of({&p_tilde, &reference});
  MatrixXd p = dense(l, p_tilde), r = dense(l, reference);
  if (norm2(r * r - r) > 1e-9) throw AnalyticError("reference is not idempotent");
  return {p_tilde, reference, norm2(p * p - p)};
}

Matrix idem(const NearIdempotent& x, IdemMethod method, int order) {
  if (!(x.defect <= kMaxIdemDefect)) throw AnalyticError("defect " + std::to_string(x.defect) + " exceeds 0.05");
  Layout l = layout_of({&x.p_tilde, &x.reference});
  MatrixXd pt = dense(l, x.p_tilde);
  if (method == IdemMethod::Newton) return sparse(l, newton(pt));
  if (order < 0 || order > 8) throw AnalyticError("series order must lie in 0..8");
  MatrixXd p = dense(l, x.reference);
  return sparse(l, series(p, p - pt, order));
}

Matrix connector_plain(const Matrix& p, const Matrix& q) {
  return Matrix::identity(p.rows(), p.ring()) - p - q;
}

Matrix connector_corrected(const Matrix& p, const Matrix& q) {
  Scalar two = p.ring().from_int(2);
  return connector_plain(p, q) + two * (q * p);
}

Matrix sign_connector(const Matrix& p, const Matrix& q) {
  Layout l = layout_of({&p, &q});
  MatrixXd pd = dense(l, p), qd = dense(l, q);
  long long n = pd.rows();
  MatrixXd one = MatrixXd::Identity(n, n);
  MatrixXcd abar = ((one - pd) + (one - qd)).cast<std::complex<double>>() / 2.0;
  MatrixXcd b = (pd + qd).cast<std::complex<double>>() / 2.0;
  auto sample = [&](int count) {
    MatrixXcd acc = MatrixXcd::Zero(n, n);
    for (int k = 0; k < count; ++k) {
      std::complex<double> z = std::polar(1.0, 2 * std::numbers::pi * k / count);
      Eigen::PartialPivLU<MatrixXcd> lu(abar + b * z);
      if (std::abs(lu.determinant()) < 1e-300) throw AnalyticError("sign integrand has a pole on the circle");
      acc += (abar - b * z) * lu.inverse();
    }
    return MatrixXd((acc / static_cast<double>(count)).real());
  };
  MatrixXd prev = sample(16);
  for (int count = 32; count <= (1 << 16); count *= 2) {
    MatrixXd next = sample(count);
    if (norm2(next - prev) <= 1e-12) return sparse(l, next);
    prev = std::move(next);
  }
  throw AnalyticError("sign series did not converge");
}

Morphism connect(const Matrix& p0, const Matrix& q0, ConnectForm form) {
  Matrix p = to_float(p0), q = to_float(q0);
  switch (form) {
    case ConnectForm::Plain: {
      Matrix c = connector_plain(p, q);
      return Morphism::diagonal(c, window_inverse(c));
    }
    case ConnectForm::Corrected: {
      Matrix c = connector_corrected(p, q);
      Matrix reflect = Matrix::identity(q.rows(), q.ring()) - q.ring().from_int(2) * q;
      return Morphism::diagonal(c, window_inverse(connector_plain(p, q)) * reflect);
    }
    case ConnectForm::Sign: {
      Matrix s = sign_connector(p, q);
      return Morphism::diagonal(s, s);
    }
  }
  throw AnalyticError("unknown connector form");
}

Reduction finite_reduce(const Matrix& p0, const Matrix& pattern0, double cutoff) {
  Matrix p = to_float(p0), pattern = to_float(pattern0);
  Matrix diff = p - pattern;
  if (!diff.is_K()) throw AnalyticError("P must differ from the pattern by a finite matrix");
  if (window_norm(p * p - p) > 1e-9) throw AnalyticError("P is not idempotent");
  if (window_norm(pattern * pattern - pattern) > 1e-9) throw AnalyticError("pattern is not idempotent");
  Reduction out;
  Matrix eps(p.rows(), p.cols(), p.ring());
  for (const auto& [key, v] : diff.fin())
    if (std::abs(v.to_double()) < cutoff) {
      eps.add_entry(key.row(), key.col(), v);
      ++out.dropped;
    }
  Matrix one = Matrix::identity(p.rows(), p.ring());
  out.bound = window_norm(p * eps) + window_norm((one - p) * eps);
  if (!(out.bound < 0.5))
    throw AnalyticError("||P eps|| + ||(1-P) eps|| = " + std::to_string(out.bound) + " is not below 1/2");
  NearIdempotent near = NearIdempotent::make(p - eps, p);
  out.p_eps = idem(near, IdemMethod::Newton);
  out.support_radius = (out.p_eps - pattern).support_radius();
  Matrix c = connector_corrected(p, out.p_eps);
  Matrix c_inv = window_inverse(c);
  out.conj = Morphism::make(c, one, c_inv, one);
  out.residual = conjugation_residual(c, p, out.p_eps);
  if (out.residual > 1e-8) throw AnalyticError("connector residual " + std::to_string(out.residual) + " above 1e-8");
  return out;
}

}  // namespace vgrass
