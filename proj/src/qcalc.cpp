#include "qconf/qcalc.hpp"

#include <stdexcept>

namespace qconf {

PAdic q_integer(long n, const PAdic& q) {
  const Field& F = *q.field();
  PAdic s = PAdic::zero(F);
  PAdic qk = PAdic::one(F);
  for (long k = 0; k < n; ++k) {
    s += qk;
    qk *= q;
  }
  return s;
}

PAdic q_factorial(long n, const PAdic& q) {
  const Field& F = *q.field();
  PAdic r = PAdic::one(F);
  PAdic qk = PAdic::one(F);
  PAdic s = PAdic::zero(F);
  for (long k = 1; k <= n; ++k) {
    s += qk;  // s = [k]_q
    qk *= q;
    r *= s;
  }
  return r;
}

std::vector<PAdic> q_binomial_row(long n, const PAdic& q) {
  const Field& F = *q.field();
  // prod_{k<n} (1 - q^k T)
  std::vector<PAdic> c(static_cast<std::size_t>(n) + 1, PAdic::zero(F));
  c[0] = PAdic::one(F);
  PAdic qk = PAdic::one(F);
  for (long k = 0; k < n; ++k) {
    for (long i = k + 1; i >= 1; --i) c[static_cast<std::size_t>(i)] -= qk * c[static_cast<std::size_t>(i - 1)];
    qk *= q;
  }
  // c_i = (-1)^i binom(n,i)_q q^{i(i-1)/2}
  for (long i = 0; i <= n; ++i) {
    PAdic v = c[static_cast<std::size_t>(i)] * q.pow(-(i * (i - 1) / 2));
    c[static_cast<std::size_t>(i)] = (i % 2 == 0) ? v : -v;
  }
  return c;
}

PAdic q_binomial(long n, long i, const PAdic& q) {
  if (n < 0 || i < 0 || i > n) throw std::invalid_argument("q_binomial: index out of range");
  return q_binomial_row(n, q)[static_cast<std::size_t>(i)];
}

QContext::QContext(PAdic q_, PAdic c_, int M_) : q(std::move(q_)), c(std::move(c_)), M(M_), membership(q_membership(q)) {
  if (!q.field()) throw std::invalid_argument("QContext: q has no field");
  if (!c.field()) c = PAdic::zero(*q.field());
}

int TwistedSeries::order() const {
  for (std::size_t n = 0; n < coeffs.size(); ++n)
    if (!coeffs[n].is_zero()) return static_cast<int>(n);
  return -1;
}

DiskSeries twisted_monomial(int n, const QContext& ctx, const Rational& log_r) {
  if (n > ctx.M) throw std::invalid_argument("twisted_monomial: n above truncation order");
  const Field& F = *ctx.q.field();
  std::vector<PAdic> a(static_cast<std::size_t>(ctx.M) + 1, PAdic::zero(F));
  a[0] = PAdic::one(F);
  PAdic qk = PAdic::one(F);
  for (int k = 0; k < n; ++k) {
    const PAdic root = ctx.c - qk * ctx.c;  // T - q^k c = Z + (c - q^k c)
    for (int i = k + 1; i >= 1; --i) a[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i - 1)] + a[static_cast<std::size_t>(i)] * root;
    a[0] = a[0] * root;
    qk *= ctx.q;
  }
  return DiskSeries(F, ctx.c, log_r, std::move(a));
}

TwistedBasis::TwistedBasis(const QContext& ctx) : ctx_(ctx) {
  const Field& F = *ctx.q.field();
  bt_.reserve(static_cast<std::size_t>(ctx.M) + 1);
  bt_.push_back({PAdic::one(F)});
  PAdic qk = PAdic::one(F);
  for (int n = 0; n < ctx.M; ++n) {
    const PAdic root = ctx.c - qk * ctx.c;
    const auto& prev = bt_.back();
    std::vector<PAdic> next(prev.size() + 1, PAdic::zero(F));
    for (std::size_t i = 0; i < prev.size(); ++i) {
      next[i + 1] += prev[i];
      next[i] += prev[i] * root;
    }
    bt_.push_back(std::move(next));
    qk *= ctx.q;
  }
}

TwistedSeries TwistedBasis::to_twisted(const DiskSeries& f) const {
  if (f.order() > ctx_.M) throw std::invalid_argument("to_twisted: series order above the basis size");
  if (!f.center().equals(ctx_.c)) throw std::invalid_argument("to_twisted: series centered away from c");
  const Field& F = *ctx_.q.field();
  std::vector<PAdic> a = f.coeffs();
  a.resize(static_cast<std::size_t>(ctx_.M) + 1, PAdic::zero(F));
  std::vector<PAdic> t(a.size(), PAdic::zero(F));
  for (std::size_t n = a.size(); n-- > 0;) {
    t[n] = a[n];
    if (t[n].is_exact_zero()) continue;
    for (std::size_t i = 0; i < n; ++i) a[i] -= t[n] * bt_[n][i];
  }
  return TwistedSeries{ctx_, std::move(t)};
}

DiskSeries TwistedBasis::from_twisted(const TwistedSeries& g, const Rational& log_r) const {
  const Field& F = *ctx_.q.field();
  if (g.coeffs.size() > bt_.size()) throw std::invalid_argument("from_twisted: more coefficients than the basis size");
  std::vector<PAdic> a(static_cast<std::size_t>(ctx_.M) + 1, PAdic::zero(F));
  for (std::size_t n = 0; n < g.coeffs.size(); ++n) {
    if (g.coeffs[n].is_exact_zero()) continue;
    for (std::size_t i = 0; i <= n; ++i) a[i] += g.coeffs[n] * bt_[n][i];
  }
  return DiskSeries(F, ctx_.c, log_r, std::move(a));
}

TwistedSeries to_twisted(const DiskSeries& f, const QContext& ctx) { return TwistedBasis(ctx).to_twisted(f); }

DiskSeries from_twisted(const TwistedSeries& g) { return TwistedBasis(g.ctx).from_twisted(g); }

Ext twisted_gauss_norm(const TwistedSeries& g, const Rational& log_rho) {
  const PAdic one = PAdic::one(*g.ctx.q.field());
  if (!((g.ctx.q - one).log_abs() + g.ctx.c.log_abs() < Ext(log_rho)))
    throw std::domain_error("twisted_gauss_norm: |q-1||c| >= rho, the twisted norm is not certified");
  Ext best = Ext::neg_inf();
  for (std::size_t n = 0; n < g.coeffs.size(); ++n)
    if (!g.coeffs[n].is_zero()) best = max(best, g.coeffs[n].log_abs() + Ext(log_rho * static_cast<std::int64_t>(n)));
  return best;
}

DiskSeries poly_sigma(const DiskSeries& f, const PAdic& q) {
  const Field& F = f.field();
  std::vector<PAdic> b(f.coeffs().size());
  PAdic qn = PAdic::one(F);
  for (std::size_t n = 0; n < b.size(); ++n) {
    b[n] = f[n] * qn;
    qn *= q;
  }
  const PAdic gamma = f.center().is_exact_zero() ? PAdic::zero(F) : (q - PAdic::one(F)) * f.center() / q;
  return DiskSeries(F, f.center(), f.log_radius(), taylor_shift(b, gamma));
}

DiskSeries poly_d_q(const DiskSeries& f, const PAdic& q) {
  const Field& F = f.field();
  const PAdic qm1 = q - PAdic::one(F);
  if (qm1.is_zero()) throw std::domain_error("d_q: q = 1");
  const DiskSeries g = poly_sigma(f, q) - f;
  // divide by T = Z + c
  const PAdic beta = -f.center();
  const std::size_t n = g.coeffs().size();
  std::vector<PAdic> quo(n, PAdic::zero(F));
  PAdic acc = PAdic::zero(F);
  for (std::size_t k = n - 1; k >= 1; --k) {
    acc = g[k] + beta * acc;
    quo[k - 1] = acc;
  }
  const PAdic inv = qm1.inverse();
  for (auto& x : quo) x = x * inv;
  return DiskSeries(F, f.center(), f.log_radius(), std::move(quo));
}

TwistedSeries twisted_taylor_coeffs(const DiskSeries& f, const QContext& ctx) {
  if (ctx.membership.kind == QMembership::Kind::root_of_unity)
    throw std::domain_error("twisted Taylor coefficients: q is a root of unity");
  const Field& F = *ctx.q.field();
  std::vector<PAdic> t(static_cast<std::size_t>(ctx.M) + 1, PAdic::zero(F));
  DiskSeries h = f.resized(ctx.M);
  for (int n = 0; n <= ctx.M; ++n) {
    t[static_cast<std::size_t>(n)] = h.evaluate(ctx.c) / q_factorial(n, ctx.q);
    if (n < ctx.M) h = poly_d_q(h, ctx.q);
  }
  return TwistedSeries{ctx, std::move(t)};
}

VerificationReport q_leibniz_check(const DiskSeries& f, const DiskSeries& g, int n, const QContext& ctx,
                                   const Ext& threshold) {
  VerificationReport rep;
  rep.threshold = threshold;
  const int M = ctx.M;
  const DiskSeries F0 = f.resized(M);
  const DiskSeries G0 = g.resized(M);
  std::vector<DiskSeries> df{F0};
  std::vector<DiskSeries> dg{G0};
  for (int k = 1; k <= n; ++k) {
    df.push_back(poly_d_q(df.back(), ctx.q));
    dg.push_back(poly_d_q(dg.back(), ctx.q));
  }
  DiskSeries lhs = F0 * G0;
  for (int k = 0; k < n; ++k) lhs = poly_d_q(lhs, ctx.q);
  const std::vector<PAdic> binoms = q_binomial_row(n, ctx.q);
  DiskSeries rhs = DiskSeries::zero(f.field(), ctx.c, f.log_radius(), M);
  for (int i = 0; i <= n; ++i) {
    const DiskSeries shifted = poly_sigma(df[static_cast<std::size_t>(n - i)], ctx.q.pow(i));
    rhs = rhs + (shifted * dg[static_cast<std::size_t>(i)]).scaled(binoms[static_cast<std::size_t>(i)]);
  }
  rep.check("q-Leibniz n=" + std::to_string(n), (lhs - rhs).min_valuation());
  return rep;
}

}  // namespace qconf
