#include "qconf/analytic.hpp"

#include <map>
#include <sstream>

namespace qconf {

namespace {

// log|x| + log|y| where a zero factor wins over an unknown bound.
Ext log_mul(const Ext& a, const Ext& b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return Ext::neg_inf();
  return a + b;
}

Ext times(const Rational& r, std::int64_t k) { return Ext(r * k); }

// C(n, k) cached per field and thread.
const PAdic& binom(const Field& F, int n, int k) {
  thread_local std::map<const Field*, std::vector<std::vector<PAdic>>> cache;
  auto& rows = cache[&F];
  while (static_cast<int>(rows.size()) <= n) {
    const int r = static_cast<int>(rows.size());
    std::vector<PAdic> row;
    row.reserve(static_cast<std::size_t>(r) + 1);
    for (int j = 0; j <= r; ++j) {
      mpz_class b;
      mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(j));
      row.push_back(PAdic::from_int(F, b));
    }
    rows.push_back(std::move(row));
  }
  return rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

std::vector<PAdic> powers(const Field& F, const PAdic& x, int n) {
  std::vector<PAdic> r;
  r.reserve(static_cast<std::size_t>(n) + 1);
  r.push_back(PAdic::one(F));
  for (int k = 1; k <= n; ++k) r.push_back(r.back() * x);
  return r;
}

bool all_zero(const std::vector<PAdic>& v) {
  for (const auto& x : v)
    if (!x.is_exact_zero()) return false;
  return true;
}

void require_same(const AnalyticFunction& f, const AnalyticFunction& g) {
  if (f.domain_ptr() != g.domain_ptr() && !f.domain().same_as(g.domain()))
    throw std::invalid_argument("analytic functions on different domains");
  if (f.order() != g.order()) throw std::invalid_argument("analytic functions with different truncation orders");
}

std::vector<PAdic> poly_mul(const std::vector<PAdic>& x, const std::vector<PAdic>& y, const Field& F) {
  std::vector<PAdic> r(x.size() + y.size() - 1, PAdic::zero(F));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_exact_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (!y[j].is_exact_zero()) r[i + j] += x[i] * y[j];
  }
  return r;
}

// log_p |T - a| at the generic point (c, rho)
Ext log_abs_linear(const GenericPoint& t, const PAdic& a) { return max(log_dist(t.c, a), Ext(t.log_rho)); }

Ext min_shilov_log_abs_linear(const Affinoid& X, const PAdic& a) {
  Ext m = Ext::inf();
  for (const GenericPoint& t : X.shilov_points()) m = min(m, log_abs_linear(t, a));
  return m;
}

}  // namespace

AnalyticFunction::AnalyticFunction(DomainPtr X, int M) : X_(std::move(X)), M_(M) {
  if (!X_) throw std::invalid_argument("analytic function without a domain");
  if (M < 0) throw std::invalid_argument("negative truncation order");
  const Field& F = X_->field();
  a_.assign(static_cast<std::size_t>(M) + 1, PAdic::zero(F));
  b_.assign(X_->hole_count(), std::vector<PAdic>(static_cast<std::size_t>(M), PAdic::zero(F)));
}

AnalyticFunction AnalyticFunction::constant(DomainPtr X, int M, const PAdic& a) {
  AnalyticFunction f(std::move(X), M);
  f.a_[0] = a;
  return f;
}

AnalyticFunction AnalyticFunction::coordinate(DomainPtr X, int M) {
  AnalyticFunction f(std::move(X), M);
  f.a_[0] = f.X_->outer().c.field() ? f.X_->outer().c : PAdic::zero(f.field());
  if (M >= 1) f.a_[1] = PAdic::one(f.field());
  return f;
}

AnalyticFunction AnalyticFunction::from_poly(DomainPtr X, int M, const std::vector<PAdic>& a) {
  AnalyticFunction f(std::move(X), M);
  if (a.size() > static_cast<std::size_t>(M) + 1) throw std::invalid_argument("from_poly: degree above truncation order");
  for (std::size_t k = 0; k < a.size(); ++k) f.a_[k] = a[k];
  return f;
}

AnalyticFunction AnalyticFunction::from_T_poly(DomainPtr X, int M, const std::vector<PAdic>& a) {
  AnalyticFunction f(std::move(X), M);
  if (a.size() > static_cast<std::size_t>(M) + 1) throw std::invalid_argument("from_T_poly: degree above truncation order");
  std::vector<PAdic> c(f.a_.size(), PAdic::zero(f.field()));
  for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k];
  f.a_ = taylor_shift(c, f.X_->outer().c);
  return f;
}

AnalyticFunction AnalyticFunction::hole_term(DomainPtr X, int M, std::size_t i, int k, const PAdic& b) {
  AnalyticFunction f(std::move(X), M);
  if (i >= f.b_.size() || k < 1 || k > M) throw std::invalid_argument("hole_term: index out of range");
  f.b_[i][static_cast<std::size_t>(k) - 1] = b;
  return f;
}

AnalyticFunction AnalyticFunction::operator-() const {
  AnalyticFunction r = *this;
  for (auto& x : r.a_) x = -x;
  for (auto& h : r.b_)
    for (auto& x : h) x = -x;
  return r;
}

AnalyticFunction operator+(const AnalyticFunction& f, const AnalyticFunction& g) {
  require_same(f, g);
  AnalyticFunction r = f;
  for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] += g.a_[k];
  for (std::size_t i = 0; i < r.b_.size(); ++i)
    for (std::size_t k = 0; k < r.b_[i].size(); ++k) r.b_[i][k] += g.b_[i][k];
  r.tail_ = max(f.tail_, g.tail_);
  return r;
}

AnalyticFunction operator-(const AnalyticFunction& f, const AnalyticFunction& g) { return f + (-g); }

AnalyticFunction operator*(const AnalyticFunction& f, const AnalyticFunction& g) {
  require_same(f, g);
  const Affinoid& X = f.domain();
  const Field& F = f.field();
  const int M = f.M_;
  const auto m = static_cast<std::size_t>(M);
  const Rational R0 = X.outer().log_r;
  AnalyticFunction r(f.X_, M);
  Ext dropped = Ext::neg_inf();

  const bool f_poly = !all_zero(f.a_);
  const bool g_poly = !all_zero(g.a_);
  if (f_poly && g_poly) {
    for (std::size_t i = 0; i <= m; ++i) {
      if (f.a_[i].is_exact_zero()) continue;
      for (std::size_t j = 0; j <= m; ++j) {
        if (g.a_[j].is_exact_zero()) continue;
        if (i + j <= m) {
          r.a_[i + j] += f.a_[i] * g.a_[j];
        } else if (!f.a_[i].is_zero() && !g.a_[j].is_zero()) {
          dropped = max(dropped, f.a_[i].log_abs() + g.a_[j].log_abs() + times(R0, static_cast<std::int64_t>(i + j)));
        }
      }
    }
  }

  // polynomial times principal part at c_i, split exactly at W = T - c_i
  auto poly_times_hole = [&](const std::vector<PAdic>& P, const std::vector<PAdic>& H, std::size_t i) {
    const PAdic d = X.holes()[i].c - X.outer().c;
    const std::vector<PAdic> Pw = taylor_shift(P, d);
    std::vector<PAdic> w(m + 1, PAdic::zero(F));
    for (std::size_t e = 0; e <= m; ++e) {
      if (Pw[e].is_exact_zero()) continue;
      for (std::size_t k = 1; k <= m; ++k) {
        const PAdic& b = H[k - 1];
        if (b.is_exact_zero()) continue;
        const PAdic t = Pw[e] * b;
        if (e >= k) w[e - k] += t;
        else r.b_[i][k - e - 1] += t;
      }
    }
    const std::vector<PAdic> back = taylor_shift(w, -d);
    for (std::size_t k = 0; k <= m; ++k) r.a_[k] += back[k];
  };

  for (std::size_t i = 0; i < f.b_.size(); ++i) {
    const bool fi = !all_zero(f.b_[i]);
    const bool gi = !all_zero(g.b_[i]);
    if (g_poly && fi) poly_times_hole(g.a_, f.b_[i], i);
    if (f_poly && gi) poly_times_hole(f.a_, g.b_[i], i);
    if (fi && gi) {
      const Rational Ri = X.holes()[i].log_r;
      for (std::size_t l = 1; l <= m; ++l) {
        if (f.b_[i][l - 1].is_exact_zero()) continue;
        for (std::size_t k = 1; k <= m; ++k) {
          const PAdic& y = g.b_[i][k - 1];
          if (y.is_exact_zero()) continue;
          if (l + k <= m) {
            r.b_[i][l + k - 1] += f.b_[i][l - 1] * y;
          } else if (!f.b_[i][l - 1].is_zero() && !y.is_zero()) {
            dropped = max(dropped, f.b_[i][l - 1].log_abs() + y.log_abs() - times(Ri, static_cast<std::int64_t>(l + k)));
          }
        }
      }
    }
  }

  // principal parts at different holes: partial fractions
  auto cross = [&](const std::vector<PAdic>& Hi, std::size_t i, const std::vector<PAdic>& Hj, std::size_t j) {
    // Taylor coefficients of sum_k Hj[k-1] (T - c_j)^{-k} at c_i, then the
    // principal part of the product at c_i.
    const PAdic d = X.holes()[i].c - X.holes()[j].c;
    const std::vector<PAdic> inv = powers(F, d.inverse(), 2 * M);
    std::vector<PAdic> e(m, PAdic::zero(F));
    for (std::size_t n = 0; n < m; ++n) {
      for (std::size_t k = 1; k <= m; ++k) {
        const PAdic& b = Hj[k - 1];
        if (b.is_exact_zero()) continue;
        const PAdic t = b * binom(F, static_cast<int>(k + n - 1), static_cast<int>(n)) * inv[k + n];
        e[n] = (n % 2 == 0) ? e[n] + t : e[n] - t;
      }
    }
    for (std::size_t k = 1; k <= m; ++k)
      for (std::size_t n = 0; n + k <= m; ++n) {
        const PAdic& b = Hi[k + n - 1];
        if (b.is_exact_zero() || e[n].is_exact_zero()) continue;
        r.b_[i][k - 1] += b * e[n];
      }
  };
  for (std::size_t i = 0; i < f.b_.size(); ++i) {
    if (all_zero(f.b_[i])) continue;
    for (std::size_t j = 0; j < g.b_.size(); ++j) {
      if (j == i || all_zero(g.b_[j])) continue;
      cross(f.b_[i], i, g.b_[j], j);
      cross(g.b_[j], j, f.b_[i], i);
    }
  }

  const Ext nf = f.norm_bound();
  const Ext ng = g.norm_bound();
  Ext tail = dropped;
  tail = max(tail, log_mul(nf, g.tail_));
  tail = max(tail, log_mul(f.tail_, ng));
  tail = max(tail, log_mul(f.tail_, g.tail_));
  r.tail_ = tail;
  return r;
}

AnalyticFunction AnalyticFunction::scaled(const PAdic& k) const {
  AnalyticFunction r = *this;
  for (auto& x : r.a_) x = x * k;
  for (auto& h : r.b_)
    for (auto& x : h) x = x * k;
  if (k.is_exact_zero()) r.tail_ = Ext::neg_inf();
  else if (!k.is_zero()) r.tail_ = log_mul(tail_, k.log_abs());
  return r;
}

AnalyticFunction AnalyticFunction::plus_constant(const PAdic& k) const {
  AnalyticFunction r = *this;
  r.a_[0] += k;
  return r;
}

AnalyticFunction AnalyticFunction::sigma(const PAdic& q) const {
  const Affinoid& X = *X_;
  const Field& F = field();
  const QInvariance inv = affinoid_q_invariant(X, q);
  if (inv.kind != QInvariance::Kind::invariant) throw DomainError("sigma_q: domain is not q-invariant: " + inv.reason);
  const auto m = static_cast<std::size_t>(M_);
  AnalyticFunction r(X_, M_);

  const PAdic one = PAdic::one(F);
  const PAdic q_inv = q.inverse();
  std::vector<PAdic> scaled_a(a_.size());
  PAdic qk = one;
  for (std::size_t k = 0; k <= m; ++k) {
    scaled_a[k] = a_[k] * qk;
    qk *= q;
  }
  const PAdic gamma = X.outer().c.is_exact_zero() ? PAdic::zero(F) : (q - one) * X.outer().c * q_inv;
  r.a_ = taylor_shift(scaled_a, gamma);

  Ext dropped = Ext::neg_inf();
  const std::vector<PAdic> q_inv_pow = powers(F, q_inv, M_);
  for (std::size_t i = 0; i < b_.size(); ++i) {
    if (all_zero(b_[i])) continue;
    std::size_t j = 0;
    while (inv.permutation[j] != i) ++j;
    const Disk& hi = X.holes()[i];
    const Disk& hj = X.holes()[j];
    const PAdic delta = hj.c - hi.c * q_inv;
    const std::vector<PAdic> dpow = powers(F, delta, M_);
    for (std::size_t k = 1; k <= m; ++k) {
      const PAdic& b = b_[i][k - 1];
      if (b.is_exact_zero()) continue;
      const PAdic bk = b * q_inv_pow[k];
      for (std::size_t n = 0; k + n <= m; ++n) {
        if (n > 0 && delta.is_exact_zero()) break;
        const PAdic t = bk * binom(F, static_cast<int>(k + n - 1), static_cast<int>(n)) * dpow[n];
        r.b_[j][k + n - 1] = (n % 2 == 0) ? r.b_[j][k + n - 1] + t : r.b_[j][k + n - 1] - t;
      }
      if (!delta.is_exact_zero() && !b.is_zero()) {
        const std::int64_t rest = M_ + 1 - static_cast<std::int64_t>(k);
        const Ext ld = delta.is_zero() ? -delta.absolute_precision() : delta.log_abs();
        dropped = max(dropped, b.log_abs() - times(hj.log_r, M_ + 1) + ld * Rational(rest));
      }
    }
  }
  r.tail_ = max(tail_, dropped);
  return r;
}

AnalyticFunction AnalyticFunction::derivative() const {
  const auto m = static_cast<std::size_t>(M_);
  AnalyticFunction r(X_, M_);
  for (std::size_t k = 1; k <= m; ++k) r.a_[k - 1] = a_[k].mul_int(static_cast<long>(k));
  Ext dropped = Ext::neg_inf();
  for (std::size_t i = 0; i < b_.size(); ++i) {
    for (std::size_t k = 1; k <= m; ++k) {
      const PAdic t = -b_[i][k - 1].mul_int(static_cast<long>(k));
      if (k + 1 <= m) r.b_[i][k] = t;
      else if (!t.is_zero()) dropped = max(dropped, t.log_abs() - times(X_->holes()[i].log_r, M_ + 1));
    }
  }
  const Ext carried = tail_.finite() ? tail_ - Ext(X_->r_X()) : tail_;
  r.tail_ = max(carried, dropped);
  return r;
}

AnalyticFunction AnalyticFunction::delta1() const { return coordinate(X_, M_) * derivative(); }

AnalyticFunction AnalyticFunction::d_q(const PAdic& q) const {
  const Field& F = field();
  const PAdic qm1 = q - PAdic::one(F);
  if (qm1.is_zero()) throw std::domain_error("d_q: q = 1");
  AnalyticFunction exact = *this;
  exact.tail_ = Ext::neg_inf();
  const AnalyticFunction diff = exact.sigma(q) - exact;
  AnalyticFunction r = diff.div_linear(PAdic::zero(F)).first.scaled(qm1.inverse());
  const Ext carried = tail_.finite() ? tail_ - Ext(X_->r_X()) : tail_;
  r.tail_ = max(r.tail_, carried);
  return r;
}

AnalyticFunction AnalyticFunction::D_q(const PAdic& q) const { return derivative().sigma(q); }

AnalyticFunction AnalyticFunction::delta_q(const PAdic& q) const { return delta1().sigma(q); }

std::pair<AnalyticFunction, PAdic> AnalyticFunction::div_linear(const PAdic& a) const {
  const Affinoid& X = *X_;
  const Field& F = field();
  const auto m = static_cast<std::size_t>(M_);
  if (X.contains(a)) {
    AnalyticFunction r(X_, M_);
    const PAdic beta = a - X.outer().c;
    PAdic acc = PAdic::zero(F);
    for (std::size_t k = m; k >= 1; --k) {
      acc = a_[k] + beta * acc;
      r.a_[k - 1] = acc;
    }
    PAdic residual = a_[0] + beta * acc;
    for (std::size_t i = 0; i < b_.size(); ++i) {
      if (all_zero(b_[i])) continue;
      const std::vector<PAdic> ip = powers(F, (a - X.holes()[i].c).inverse(), M_ + 1);
      for (std::size_t k = 1; k <= m; ++k) {
        const PAdic& b = b_[i][k - 1];
        if (b.is_exact_zero()) continue;
        residual += b * ip[k];
        for (std::size_t j = 1; j <= k; ++j) r.b_[i][j - 1] -= b * ip[k + 1 - j];
      }
    }
    r.tail_ = tail_.finite() ? tail_ - min_shilov_log_abs_linear(X, a) : tail_;
    return {r, residual};
  }
  // 1/(T - a) in Mittag-Leffler form
  AnalyticFunction e(X_, M_);
  if (const auto j = X.hole_containing(a)) {
    const Disk& h = X.holes()[*j];
    const PAdic beta = a - h.c;
    if (beta.is_exact_zero()) {
      e.b_[*j][0] = PAdic::one(F);
    } else {
      const std::vector<PAdic> bp = powers(F, beta, M_);
      for (std::size_t n = 0; n < m; ++n) e.b_[*j][n] = bp[n];
      e.tail_ = beta.is_zero() ? Ext::neg_inf() : beta.log_abs() * Rational(M_) - times(h.log_r, M_ + 1);
    }
  } else {
    const PAdic beta = a - X.outer().c;
    const std::vector<PAdic> ip = powers(F, beta.inverse(), M_ + 1);
    for (std::size_t n = 0; n <= m; ++n) e.a_[n] = -ip[n + 1];
    e.tail_ = beta.log_abs() * Rational(-(M_ + 2)) + times(X.outer().log_r, M_ + 1);
  }
  return {*this * e, PAdic::zero(F)};
}

AnalyticFunction AnalyticFunction::inverse() const {
  const Field& F = field();
  const PAdic& a0 = a_[0];
  if (a0.is_zero()) throw std::domain_error("inverse: constant term vanishes");
  AnalyticFunction rest = *this;
  rest.a_[0] = PAdic::zero(F);
  if (!(max(rest.norm_bound(), tail_) < a0.log_abs()))
    throw std::domain_error("inverse: the constant term does not dominate on X");
  AnalyticFunction g = constant(X_, M_, a0.inverse());
  if (rest.is_exact_zero()) return g;
  Ext last = Ext::neg_inf();
  for (int it = 0; it < 64; ++it) {
    AnalyticFunction err = (*this * g).plus_constant(-PAdic::one(F));
    err.tail_ = Ext::neg_inf();
    const Ext v = err.difference_valuation();
    if (v.is_inf() || (it > 0 && v <= last)) break;
    last = v;
    g = g - g * err;
  }
  g.tail_ = max(g.tail_, log_mul(tail_, -a0.log_abs() - a0.log_abs()));
  return g;
}

AnalyticFunction AnalyticFunction::frobenius_substitute(int p, DomainPtr target) const {
  const Affinoid& X = *X_;
  if (!X.outer().c.is_exact_zero() && !X.outer().c.is_zero()) throw DomainError("Frobenius substitution needs the domain centered at 0");
  for (const Disk& h : X.holes())
    if (!h.c.is_zero()) throw DomainError("Frobenius substitution needs holes centered at 0");
  if (target->hole_count() != X.hole_count()) throw DomainError("Frobenius substitution: target domain shape differs");
  AnalyticFunction r(target, M_);
  const auto m = static_cast<std::size_t>(M_);
  const auto pp = static_cast<std::size_t>(p);
  Ext dropped = Ext::neg_inf();
  for (std::size_t k = 0; k <= m; ++k) {
    if (a_[k].is_exact_zero()) continue;
    if (k * pp <= m) r.a_[k * pp] = a_[k];
    else if (!a_[k].is_zero()) dropped = max(dropped, a_[k].log_abs() + times(X.outer().log_r, static_cast<std::int64_t>(k)));
  }
  for (std::size_t i = 0; i < b_.size(); ++i)
    for (std::size_t k = 1; k <= m; ++k) {
      const PAdic& b = b_[i][k - 1];
      if (b.is_exact_zero()) continue;
      if (k * pp <= m) r.b_[i][k * pp - 1] = b;
      else if (!b.is_zero()) dropped = max(dropped, b.log_abs() - times(X.holes()[i].log_r, static_cast<std::int64_t>(k)));
    }
  r.tail_ = max(tail_, dropped);
  return r;
}

AnalyticFunction AnalyticFunction::with_order(int M) const {
  AnalyticFunction r(X_, M);
  const auto m = static_cast<std::size_t>(M);
  Ext dropped = Ext::neg_inf();
  for (std::size_t k = 0; k < a_.size(); ++k) {
    if (k <= m) r.a_[k] = a_[k];
    else if (!a_[k].is_zero()) dropped = max(dropped, a_[k].log_abs() + times(X_->outer().log_r, static_cast<std::int64_t>(k)));
  }
  for (std::size_t i = 0; i < b_.size(); ++i)
    for (std::size_t k = 1; k <= b_[i].size(); ++k) {
      if (k <= m) r.b_[i][k - 1] = b_[i][k - 1];
      else if (!b_[i][k - 1].is_zero()) dropped = max(dropped, b_[i][k - 1].log_abs() - times(X_->holes()[i].log_r, static_cast<std::int64_t>(k)));
    }
  r.tail_ = max(tail_, dropped);
  return r;
}

PAdic AnalyticFunction::evaluate(const PAdic& x) const {
  const Field& F = field();
  const PAdic z = x - X_->outer().c;
  PAdic acc = PAdic::zero(F);
  for (std::size_t k = a_.size(); k-- > 0;) acc = acc * z + a_[k];
  for (std::size_t i = 0; i < b_.size(); ++i) {
    if (all_zero(b_[i])) continue;
    const PAdic w = (x - X_->holes()[i].c).inverse();
    PAdic h = PAdic::zero(F);
    for (std::size_t k = b_[i].size(); k-- > 0;) h = (h + b_[i][k]) * w;
    acc += h;
  }
  return acc;
}

NormResult AnalyticFunction::gauss_norm(const PAdic& c, const Rational& log_rho) const {
  const Affinoid& X = *X_;
  const Field& F = field();
  if (!X.contains_generic({c, log_rho}))
    throw DomainError("gauss_norm: (" + c.str() + ", p^" + rational_str(log_rho) + ") is not a generic point of X");
  // N = f * prod (T - c_i)^{m_i} is a polynomial and the Gauss norm is
  // multiplicative, so |f| = |N| / prod |T - c_i|^{m_i}.
  std::vector<std::size_t> mult(b_.size(), 0);
  for (std::size_t i = 0; i < b_.size(); ++i)
    for (std::size_t k = b_[i].size(); k >= 1; --k)
      if (!b_[i][k - 1].is_exact_zero()) {
        mult[i] = k;
        break;
      }
  // (T - c_i) written in Z = T - c
  auto linear = [&](const PAdic& ci) { return std::vector<PAdic>{c - ci, PAdic::one(F)}; };
  auto power_of = [&](const PAdic& ci, std::size_t e) {
    std::vector<PAdic> r{PAdic::one(F)};
    const std::vector<PAdic> l = linear(ci);
    for (std::size_t k = 0; k < e; ++k) r = poly_mul(r, l, F);
    return r;
  };
  std::vector<std::vector<PAdic>> pw(b_.size());
  for (std::size_t i = 0; i < b_.size(); ++i) pw[i] = power_of(X.holes()[i].c, mult[i]);
  auto product_except = [&](std::size_t skip) {
    std::vector<PAdic> r{PAdic::one(F)};
    for (std::size_t i = 0; i < b_.size(); ++i)
      if (i != skip && mult[i] > 0) r = poly_mul(r, pw[i], F);
    return r;
  };
  std::vector<PAdic> N = poly_mul(taylor_shift(a_, c - X.outer().c), product_except(b_.size()), F);
  for (std::size_t i = 0; i < b_.size(); ++i) {
    if (mult[i] == 0) continue;
    // sum_k b_k W^{m_i - k}, W = T - c_i
    std::vector<PAdic> h(mult[i], PAdic::zero(F));
    for (std::size_t k = 1; k <= mult[i]; ++k) h[mult[i] - k] = b_[i][k - 1];
    const std::vector<PAdic> term = poly_mul(taylor_shift(h, c - X.holes()[i].c), product_except(i), F);
    if (term.size() > N.size()) N.resize(term.size(), PAdic::zero(F));
    for (std::size_t k = 0; k < term.size(); ++k) N[k] += term[k];
  }
  Ext norm = Ext::neg_inf();
  for (std::size_t k = 0; k < N.size(); ++k)
    if (!N[k].is_zero()) norm = max(norm, N[k].log_abs() + times(log_rho, static_cast<std::int64_t>(k)));
  if (norm.finite()) {
    const GenericPoint t{c, log_rho};
    for (std::size_t i = 0; i < b_.size(); ++i)
      if (mult[i] > 0) norm = norm - log_abs_linear(t, X.holes()[i].c) * Rational(static_cast<std::int64_t>(mult[i]));
  }
  NormResult r;
  r.log_norm = norm;
  r.truncation_limited = !tail_.is_neg_inf() && tail_ >= norm;
  return r;
}

NormResult AnalyticFunction::sup_norm() const {
  NormResult r;
  for (const GenericPoint& t : X_->shilov_points()) {
    const NormResult n = gauss_norm(t.c, t.log_rho);
    r.log_norm = max(r.log_norm, n.log_norm);
    r.truncation_limited = r.truncation_limited || n.truncation_limited;
  }
  r.truncation_limited = !tail_.is_neg_inf() && tail_ >= r.log_norm;
  return r;
}

DiskSeries AnalyticFunction::taylor_at(const PAdic& c, int order) const {
  const Affinoid& X = *X_;
  const Field& F = field();
  const Rational rho = X.rho(c);
  const auto n = static_cast<std::size_t>(order);
  std::vector<PAdic> s = taylor_shift(a_, c - X.outer().c);
  s.resize(std::max(s.size(), n + 1), PAdic::zero(F));
  s.resize(n + 1);
  for (std::size_t i = 0; i < b_.size(); ++i) {
    if (all_zero(b_[i])) continue;
    const std::vector<PAdic> ip = powers(F, (c - X.holes()[i].c).inverse(), M_ + order);
    for (std::size_t mm = 0; mm <= n; ++mm) {
      PAdic acc = PAdic::zero(F);
      for (std::size_t k = 1; k <= b_[i].size(); ++k) {
        const PAdic& b = b_[i][k - 1];
        if (b.is_exact_zero()) continue;
        acc += b * binom(F, static_cast<int>(k + mm - 1), static_cast<int>(mm)) * ip[k + mm];
      }
      s[mm] = (mm % 2 == 0) ? s[mm] + acc : s[mm] - acc;
    }
  }
  return DiskSeries(F, c, rho, std::move(s));
}

Ext AnalyticFunction::norm_bound() const {
  Ext r = Ext::neg_inf();
  for (std::size_t k = 0; k < a_.size(); ++k)
    if (!a_[k].is_zero()) r = max(r, a_[k].log_abs() + times(X_->outer().log_r, static_cast<std::int64_t>(k)));
  for (std::size_t i = 0; i < b_.size(); ++i)
    for (std::size_t k = 1; k <= b_[i].size(); ++k)
      if (!b_[i][k - 1].is_zero()) r = max(r, b_[i][k - 1].log_abs() - times(X_->holes()[i].log_r, static_cast<std::int64_t>(k)));
  return r;
}

Ext AnalyticFunction::difference_valuation() const {
  Ext r = Ext::inf();
  for (std::size_t k = 0; k < a_.size(); ++k) {
    const Ext v = a_[k].valuation_bound();
    if (!v.is_inf()) r = min(r, v - times(X_->outer().log_r, static_cast<std::int64_t>(k)));
  }
  for (std::size_t i = 0; i < b_.size(); ++i)
    for (std::size_t k = 1; k <= b_[i].size(); ++k) {
      const Ext v = b_[i][k - 1].valuation_bound();
      if (!v.is_inf()) r = min(r, v + times(X_->holes()[i].log_r, static_cast<std::int64_t>(k)));
    }
  return r;
}

bool AnalyticFunction::is_exact_zero() const {
  if (!tail_.is_neg_inf() || !all_zero(a_)) return false;
  for (const auto& h : b_)
    if (!all_zero(h)) return false;
  return true;
}

std::string AnalyticFunction::str(int terms) const {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const PAdic& x, const std::string& mono) {
    if (x.is_exact_zero()) return;
    if (!first) os << " + ";
    first = false;
    os << "[" << x.str() << "]" << mono;
  };
  int shown = 0;
  for (std::size_t k = 0; k < a_.size() && shown < terms; ++k) {
    if (a_[k].is_exact_zero()) continue;
    emit(a_[k], k == 0 ? "" : "(T-c0)^" + std::to_string(k));
    ++shown;
  }
  for (std::size_t i = 0; i < b_.size(); ++i) {
    int hs = 0;
    for (std::size_t k = 1; k <= b_[i].size() && hs < terms; ++k) {
      if (b_[i][k - 1].is_exact_zero()) continue;
      emit(b_[i][k - 1], "(T-c" + std::to_string(i + 1) + ")^-" + std::to_string(k));
      ++hs;
    }
  }
  if (first) os << "0";
  if (!tail_.is_neg_inf()) os << " + O(p^" << (-tail_).str() << ")";
  return os.str();
}

FunctionMatrix identity_matrix(const DomainPtr& X, int M, std::size_t n) {
  FunctionMatrix r = zero_matrix(X, M, n, n);
  for (std::size_t i = 0; i < n; ++i) r(i, i) = AnalyticFunction::constant(X, M, PAdic::one(X->field()));
  return r;
}

FunctionMatrix zero_matrix(const DomainPtr& X, int M, std::size_t rows, std::size_t cols) {
  return FunctionMatrix(rows, cols, AnalyticFunction::zero(X, M));
}

FunctionMatrix constant_matrix(const DomainPtr& X, int M, const Matrix<PAdic>& c) {
  return c.map([&](const PAdic& x) { return AnalyticFunction::constant(X, M, x); });
}

FunctionMatrix scaled(const FunctionMatrix& m, const PAdic& k) {
  return m.map([&](const AnalyticFunction& f) { return f.scaled(k); });
}

FunctionMatrix sigma(const FunctionMatrix& m, const PAdic& q) {
  return m.map([&](const AnalyticFunction& f) { return f.sigma(q); });
}

FunctionMatrix derivative(const FunctionMatrix& m) {
  return m.map([](const AnalyticFunction& f) { return f.derivative(); });
}

FunctionMatrix delta1(const FunctionMatrix& m) {
  return m.map([](const AnalyticFunction& f) { return f.delta1(); });
}

FunctionMatrix d_q(const FunctionMatrix& m, const PAdic& q) {
  return m.map([&](const AnalyticFunction& f) { return f.d_q(q); });
}

FunctionMatrix D_q(const FunctionMatrix& m, const PAdic& q) {
  return m.map([&](const AnalyticFunction& f) { return f.D_q(q); });
}

FunctionMatrix div_linear(const FunctionMatrix& m, const PAdic& a) {
  return m.map([&](const AnalyticFunction& f) { return f.div_linear(a).first; });
}

namespace {

FunctionMatrix minor_of(const FunctionMatrix& m, std::size_t row, std::size_t col) {
  const std::size_t n = m.rows();
  FunctionMatrix r(n - 1, n - 1, m(0, 0));
  for (std::size_t i = 0, ri = 0; i < n; ++i) {
    if (i == row) continue;
    for (std::size_t j = 0, rj = 0; j < n; ++j) {
      if (j == col) continue;
      r(ri, rj++) = m(i, j);
    }
    ++ri;
  }
  return r;
}

}  // namespace

AnalyticFunction determinant(const FunctionMatrix& m) {
  if (!m.square() || m.rows() == 0) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  AnalyticFunction d = AnalyticFunction::zero(m(0, 0).domain_ptr(), m(0, 0).order());
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_exact_zero()) continue;
    const AnalyticFunction t = m(0, j) * determinant(minor_of(m, 0, j));
    d = (j % 2 == 0) ? d + t : d - t;
  }
  return d;
}

FunctionMatrix inverse(const FunctionMatrix& m) {
  if (!m.square() || m.rows() == 0) throw std::invalid_argument("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  const AnalyticFunction inv_det = determinant(m).inverse();
  if (n == 1) return FunctionMatrix(1, 1, inv_det);
  FunctionMatrix r(n, n, inv_det);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      AnalyticFunction c = (n == 2) ? m(1 - j, 1 - i) : determinant(minor_of(m, j, i));
      if ((i + j) % 2 == 1) c = -c;
      r(i, j) = c * inv_det;
    }
  return r;
}

Matrix<PAdic> evaluate(const FunctionMatrix& m, const PAdic& x) {
  return m.map([&](const AnalyticFunction& f) { return f.evaluate(x); });
}

NormResult gauss_norm(const FunctionMatrix& m, const PAdic& c, const Rational& log_rho) {
  NormResult r;
  for (const auto& f : m.data()) {
    const NormResult n = f.gauss_norm(c, log_rho);
    r.log_norm = max(r.log_norm, n.log_norm);
  }
  r.truncation_limited = tail_bound(m) >= r.log_norm && !tail_bound(m).is_neg_inf();
  return r;
}

NormResult sup_norm(const FunctionMatrix& m) {
  NormResult r;
  for (const auto& f : m.data()) {
    const NormResult n = f.sup_norm();
    r.log_norm = max(r.log_norm, n.log_norm);
  }
  r.truncation_limited = tail_bound(m) >= r.log_norm && !tail_bound(m).is_neg_inf();
  return r;
}

Ext difference_valuation(const FunctionMatrix& m) {
  Ext r = Ext::inf();
  for (const auto& f : m.data()) r = min(r, f.difference_valuation());
  return r;
}

Ext tail_bound(const FunctionMatrix& m) {
  Ext r = Ext::neg_inf();
  for (const auto& f : m.data()) r = max(r, f.tail());
  return r;
}

}  // namespace qconf
