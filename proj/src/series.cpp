#include "qconf/series.hpp"

#include <cmath>
#include <sstream>

#include "qconf/affinoid.hpp"

namespace qconf {

namespace {

void require_compatible(const DiskSeries& f, const DiskSeries& g) {
  if (&f.field() != &g.field()) throw std::invalid_argument("series over different fields");
  if (!f.center().equals(g.center())) throw std::invalid_argument("series expanded at different centers");
}

PAdic scalar_exp(const PAdic& x) {
  const Field& F = *x.field();
  if (x.is_zero()) return PAdic::one(F);
  const Rational margin = x.valuation().value() - Rational(1, F.p() - 1);
  if (margin <= Rational(0)) throw std::domain_error("exp: |x| >= omega, series does not converge");
  const std::int64_t n_max = ceil_of(Rational(F.precision() + 4) / margin) + 2;
  PAdic term = PAdic::one(F);
  PAdic acc = PAdic::one(F);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    term = term * x / PAdic::from_int(F, static_cast<long>(n));
    acc += term;
  }
  return acc;
}

PAdic scalar_log1p(const PAdic& x) {
  const Field& F = *x.field();
  if (x.is_zero()) return PAdic::zero(F);
  const Rational v = x.valuation().value();
  if (v <= Rational(0)) throw std::domain_error("log: |x| >= 1, series does not converge");
  std::int64_t n_max = 1;
  while (Rational(n_max) * v - Rational(static_cast<std::int64_t>(std::log2(static_cast<double>(n_max + 1)) + 1)) <= Rational(F.precision() + 2)) ++n_max;
  PAdic pw = x;
  PAdic acc = PAdic::zero(F);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const PAdic t = pw.div_int(static_cast<long>(n));
    acc = (n % 2 == 1) ? acc + t : acc - t;
    pw *= x;
  }
  return acc;
}

}  // namespace

// Coefficients of P(Z + gamma) from those of P(Z).
std::vector<PAdic> taylor_shift(const std::vector<PAdic>& a, const PAdic& gamma) {
  const std::size_t n = a.size();
  if (gamma.is_exact_zero() || n == 0) return a;
  std::vector<PAdic> r(n, PAdic::zero(*gamma.field()));
  // Horner: r <- r * (Z + gamma) + a_k
  for (std::size_t k = n; k-- > 0;) {
    const std::size_t deg = n - 1 - k;
    for (std::size_t j = deg; j >= 1; --j) r[j] = r[j - 1] + r[j] * gamma;
    r[0] = r[0] * gamma + a[k];
  }
  return r;
}

DiskSeries::DiskSeries(const Field& F, PAdic center, Rational log_r, std::vector<PAdic> coeffs)
    : F_(&F), c_(std::move(center)), log_r_(log_r), a_(std::move(coeffs)) {
  if (a_.empty()) a_.push_back(PAdic::zero(F));
}

DiskSeries DiskSeries::zero(const Field& F, const PAdic& c, const Rational& log_r, int M) {
  return DiskSeries(F, c, log_r, std::vector<PAdic>(static_cast<std::size_t>(M) + 1, PAdic::zero(F)));
}

DiskSeries DiskSeries::constant(const Field& F, const PAdic& c, const Rational& log_r, int M, const PAdic& a) {
  DiskSeries s = zero(F, c, log_r, M);
  s.a_[0] = a;
  return s;
}

DiskSeries DiskSeries::variable(const Field& F, const PAdic& c, const Rational& log_r, int M) {
  DiskSeries s = zero(F, c, log_r, M);
  if (M >= 1) s.a_[1] = PAdic::one(F);
  return s;
}

DiskSeries DiskSeries::identity(const Field& F, const PAdic& c, const Rational& log_r, int M) {
  DiskSeries s = variable(F, c, log_r, M);
  s.a_[0] = c.field() ? c : PAdic::zero(F);
  return s;
}

Ext DiskSeries::log_gauss_norm(const Rational& log_rho) const {
  Ext best = Ext::neg_inf();
  for (std::size_t n = 0; n < a_.size(); ++n) {
    if (a_[n].is_zero()) continue;
    best = max(best, a_[n].log_abs() + Ext(log_rho * static_cast<std::int64_t>(n)));
  }
  return best;
}

Ext DiskSeries::gauss_valuation_bound(const Rational& log_rho) const {
  Ext best = Ext::inf();
  for (std::size_t n = 0; n < a_.size(); ++n) {
    const Ext v = a_[n].valuation_bound();
    if (v.is_inf()) continue;
    best = min(best, v - Ext(log_rho * static_cast<std::int64_t>(n)));
  }
  return best;
}

Ext DiskSeries::min_valuation() const { return gauss_valuation_bound(Rational(0)); }

DiskSeries DiskSeries::operator-() const {
  DiskSeries r = *this;
  for (auto& x : r.a_) x = -x;
  return r;
}

DiskSeries operator+(const DiskSeries& f, const DiskSeries& g) {
  require_compatible(f, g);
  const int M = std::min(f.order(), g.order());
  DiskSeries r = DiskSeries::zero(f.field(), f.c_, std::min(f.log_r_, g.log_r_), M);
  for (int n = 0; n <= M; ++n) r.a_[static_cast<std::size_t>(n)] = f.a_[static_cast<std::size_t>(n)] + g.a_[static_cast<std::size_t>(n)];
  return r;
}

DiskSeries operator-(const DiskSeries& f, const DiskSeries& g) { return f + (-g); }

DiskSeries operator*(const DiskSeries& f, const DiskSeries& g) {
  require_compatible(f, g);
  const int M = std::min(f.order(), g.order());
  DiskSeries r = DiskSeries::zero(f.field(), f.c_, std::min(f.log_r_, g.log_r_), M);
  for (int i = 0; i <= M; ++i) {
    const PAdic& fi = f.a_[static_cast<std::size_t>(i)];
    if (fi.is_exact_zero()) continue;
    for (int j = 0; i + j <= M; ++j) {
      const PAdic& gj = g.a_[static_cast<std::size_t>(j)];
      if (gj.is_exact_zero()) continue;
      r.a_[static_cast<std::size_t>(i + j)] += fi * gj;
    }
  }
  return r;
}

DiskSeries DiskSeries::scaled(const PAdic& k) const {
  DiskSeries r = *this;
  for (auto& x : r.a_) x = x * k;
  return r;
}

DiskSeries DiskSeries::truncated(int M) const {
  if (M >= order()) return *this;
  DiskSeries r = *this;
  r.a_.resize(static_cast<std::size_t>(M) + 1);
  return r;
}

DiskSeries DiskSeries::resized(int M) const {
  DiskSeries r = *this;
  r.a_.resize(static_cast<std::size_t>(M) + 1, PAdic::zero(*F_));
  return r;
}

PAdic DiskSeries::evaluate(const PAdic& x) const {
  const PAdic z = x - c_;
  PAdic acc = PAdic::zero(*F_);
  for (std::size_t n = a_.size(); n-- > 0;) acc = acc * z + a_[n];
  return acc;
}

DiskSeries DiskSeries::derivative() const {
  const int M = std::max(order() - 1, 0);
  DiskSeries r = zero(*F_, c_, log_r_, M);
  for (int n = 1; n <= order(); ++n) r.a_[static_cast<std::size_t>(n - 1)] = a_[static_cast<std::size_t>(n)].mul_int(n);
  return r;
}

DiskSeries DiskSeries::delta1() const {
  const DiskSeries d = derivative();
  const DiskSeries t = identity(*F_, c_, log_r_, d.order());
  return t * d;
}

DiskSeries DiskSeries::sigma(const PAdic& q) const {
  const PAdic one = PAdic::one(*F_);
  if (!c_.is_exact_zero() && !((q - one).log_abs() + c_.log_abs() < Ext(log_r_)))
    throw DomainError("sigma_q: disk is not q-invariant (|q-1||c| >= R)");
  std::vector<PAdic> b(a_.size());
  PAdic qn = one;
  for (std::size_t n = 0; n < a_.size(); ++n) {
    b[n] = a_[n] * qn;
    qn *= q;
  }
  const PAdic gamma = c_.is_exact_zero() ? PAdic() : (q - one) * c_ / q;
  return DiskSeries(*F_, c_, log_r_, taylor_shift(b, gamma));
}

DiskSeries DiskSeries::recentered(const PAdic& c2) const {
  const PAdic gamma = c2 - c_;
  if (!gamma.is_zero() && !(gamma.log_abs() < Ext(log_r_))) throw DomainError("recentered: new center outside the disk");
  return DiskSeries(*F_, c2, log_r_, taylor_shift(a_, gamma));
}

DiskSeries DiskSeries::compose(const DiskSeries& g) const {
  const int M = g.order();
  DiskSeries acc = zero(*F_, g.c_, g.log_r_, M);
  for (std::size_t n = a_.size(); n-- > 0;) {
    acc = acc * g;
    acc.a_[0] += a_[n];
  }
  return acc;
}

DiskSeries DiskSeries::inverse() const {
  if (a_[0].is_zero()) throw std::domain_error("series inverse: constant term vanishes");
  const PAdic inv0 = a_[0].inverse();
  DiskSeries r = zero(*F_, c_, log_r_, order());
  r.a_[0] = inv0;
  for (int n = 1; n <= order(); ++n) {
    PAdic s = PAdic::zero(*F_);
    for (int k = 1; k <= n; ++k) s += a_[static_cast<std::size_t>(k)] * r.a_[static_cast<std::size_t>(n - k)];
    r.a_[static_cast<std::size_t>(n)] = -(s * inv0);
  }
  return r;
}

std::string DiskSeries::str(int terms) const {
  std::ostringstream os;
  for (int n = 0; n <= std::min(order(), terms - 1); ++n) {
    if (n) os << " + ";
    os << "[" << a_[static_cast<std::size_t>(n)].str() << "]";
    if (n) os << "(T-c)^" << n;
  }
  if (order() >= terms) os << " + ...";
  return os.str();
}

DiskSeries exp_series(const DiskSeries& g) {
  const Field& F = g.field();
  const int M = g.order();
  DiskSeries e = DiskSeries::zero(F, g.center(), g.log_radius(), M);
  e.coeffs()[0] = PAdic::one(F);
  // n E_n = sum_{m=1}^n m g_m E_{n-m}
  for (int n = 1; n <= M; ++n) {
    PAdic s = PAdic::zero(F);
    for (int m = 1; m <= n; ++m) {
      const PAdic& gm = g[static_cast<std::size_t>(m)];
      if (gm.is_exact_zero()) continue;
      s += gm.mul_int(m) * e[static_cast<std::size_t>(n - m)];
    }
    e.coeffs()[static_cast<std::size_t>(n)] = s.div_int(n);
  }
  const PAdic& g0 = g[0];
  if (!g0.is_zero()) e = e.scaled(scalar_exp(g0));
  return e;
}

DiskSeries exp_series_certified(const DiskSeries& g) {
  const PAdic& g0 = g[0];
  if (!g0.is_zero() && !(g0.valuation() > Ext(Rational(1, g.field().p() - 1))))
    throw std::domain_error("exp: |g(c)| >= omega");
  return exp_series(g);
}

DiskSeries log1p_series(const DiskSeries& g) {
  const Field& F = g.field();
  const int M = g.order();
  const PAdic one = PAdic::one(F);
  DiskSeries one_plus = g;
  one_plus.coeffs()[0] += one;
  const DiskSeries h = g.derivative() * one_plus.inverse().truncated(std::max(M - 1, 0));
  DiskSeries L = DiskSeries::zero(F, g.center(), g.log_radius(), M);
  for (int n = 1; n <= M; ++n) L.coeffs()[static_cast<std::size_t>(n)] = h[static_cast<std::size_t>(n - 1)].div_int(n);
  if (!g[0].is_zero()) L.coeffs()[0] = scalar_log1p(g[0]);
  return L;
}

std::string RadiusEstimate::str() const {
  std::ostringstream os;
  os << "log_p R >= " << log_radius.str() << " (window " << window_lo << ".." << window_hi;
  if (inconclusive) os << ", inconclusive";
  os << ", ratios " << min_ratio.str() << ".." << max_ratio.str() << ", slope " << slope.str() << ")";
  return os.str();
}

RadiusEstimate estimate_from_valuations(const std::vector<Ext>& v) {
  RadiusEstimate r;
  const int M = static_cast<int>(v.size()) - 1;
  r.window_hi = M;
  r.window_lo = std::max(1, (M + 1) / 2);
  int first = -1;
  int last = -1;
  for (int n = r.window_lo; n <= M; ++n) {
    const Ext& vn = v[static_cast<std::size_t>(n)];
    if (!vn.finite()) continue;
    const Ext ratio = vn / Rational(n);
    if (ratio < r.min_ratio) {
      r.min_ratio = ratio;
      r.argmin = n;
    }
    r.max_ratio = max(r.max_ratio, ratio);
    if (first < 0) first = n;
    last = n;
  }
  if (first < 0) {
    r.inconclusive = true;
    r.log_radius = Ext::inf();
    return r;
  }
  r.log_radius = r.min_ratio;
  if (last > first)
    r.slope = (v[static_cast<std::size_t>(last)] - v[static_cast<std::size_t>(first)]) / Rational(last - first);
  return r;
}

RadiusEstimate estimate_radius(const DiskSeries& f) {
  std::vector<Ext> v;
  v.reserve(f.coeffs().size());
  for (const auto& a : f.coeffs()) v.push_back(a.valuation());
  return estimate_from_valuations(v);
}

Rational estimator_tolerance(int M, int p) {
  std::int64_t k = 0;
  std::int64_t pk = 1;
  while (pk < M) {
    pk *= p;
    ++k;
  }
  return Rational(2 * (k + 1), std::max(M, 1));
}

PAdic binomial(const Field& F, long n, long k) {
  if (k < 0 || n < 0 || k > n) return PAdic::zero(F);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return PAdic::from_int(F, b);
}

}  // namespace qconf
