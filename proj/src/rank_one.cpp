#include "qconf/rank_one.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace qconf {

namespace {

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// v_p(n!)
long factorial_valuation(long n, int p) {
  long v = 0;
  for (long q = n / p; q > 0; q /= p) v += q;
  return v;
}

const Field& raised(const Field& F, int extra) { return make_field(F.p(), F.level(), F.precision() + extra); }

InvPoly lift(const InvPoly& a, const Field& G) {
  InvPoly r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x.padded_to(G));
  return r;
}

InvPoly drop(const InvPoly& a, const Field& F) {
  InvPoly r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x.to_field(F));
  return r;
}

WittVector lift(const WittVector& w, const Field& G) {
  WittVector r{&G, {}};
  for (const auto& f : w.f) r.f.push_back(lift(f, G));
  return r;
}

WittVector drop(const WittVector& w, const Field& F) {
  WittVector r{&F, {}};
  for (const auto& f : w.f) r.f.push_back(drop(f, F));
  return r;
}

void trim(InvPoly& a) {
  while (!a.empty() && a.back().is_exact_zero()) a.pop_back();
}

// Product truncated at degree cap (cap < 0: no truncation).
InvPoly mul_capped(const InvPoly& a, const InvPoly& b, long cap) {
  if (a.empty() || b.empty()) return {};
  std::size_t n = a.size() + b.size() - 1;
  if (cap >= 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap) + 1);
  InvPoly r(n);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (a[i].is_exact_zero()) continue;
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) {
      if (b[j].is_exact_zero()) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  trim(r);
  return r;
}

InvPoly pow_capped(const InvPoly& a, long n, long cap) {
  InvPoly r;
  if (n == 0) return r;  // caller never asks for f^0
  InvPoly base = a;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      r = first ? base : mul_capped(r, base, cap);
      first = false;
    }
    n >>= 1;
    if (n > 0) base = mul_capped(base, base, cap);
  }
  return r;
}

std::vector<InvPoly> phantom_capped(const WittVector& w, std::size_t len, long cap) {
  const Field& F = *w.F;
  const int p = F.p();
  std::vector<InvPoly> phi(len);
  for (std::size_t j = 0; j < len; ++j) {
    for (std::size_t i = 0; i <= j && i < w.length(); ++i) {
      if (inv_poly_is_zero(w.f[i])) continue;
      InvPoly t = pow_capped(w.f[i], ipow(p, static_cast<int>(j - i)), cap);
      phi[j] = inv_poly_add(phi[j], inv_poly_scaled(t, PAdic::from_int(F, ipow(p, static_cast<int>(i)))));
    }
  }
  return phi;
}

WittVector from_phantom_raw(const Field& F, const std::vector<InvPoly>& phi, bool require_integral) {
  const int p = F.p();
  WittVector w{&F, {}};
  for (std::size_t j = 0; j < phi.size(); ++j) {
    InvPoly r = phi[j];
    for (std::size_t i = 0; i < j; ++i) {
      if (inv_poly_is_zero(w.f[i])) continue;
      InvPoly t = inv_poly_pow(w.f[i], ipow(p, static_cast<int>(j - i)));
      r = inv_poly_sub(r, inv_poly_scaled(t, PAdic::from_int(F, ipow(p, static_cast<int>(i)))));
    }
    const long pj = ipow(p, static_cast<int>(j));
    for (auto& x : r) x = x.div_int(pj);
    trim(r);
    if (require_integral && inv_poly_min_valuation(r) < Ext(0))
      throw std::domain_error("witt: component " + std::to_string(j) + " is not integral");
    w.f.push_back(std::move(r));
  }
  return w;
}

// Phantom-wise binary operation at raised precision.
template <class Op>
WittVector combine(const WittVector& a, const WittVector& b, Op op, bool require_integral) {
  if (a.F != b.F) throw std::invalid_argument("witt: different fields");
  if (a.length() != b.length()) throw std::invalid_argument("witt: different lengths");
  const Field& F = *a.F;
  const Field& G = raised(F, static_cast<int>(a.length()) + 1);
  const auto pa = phantom(lift(a, G));
  const auto pb = phantom(lift(b, G));
  std::vector<InvPoly> s(pa.size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = op(pa[j], pb[j]);
  return drop(from_phantom_raw(G, s, require_integral), F);
}

WittVector witt_sub_unchecked(const WittVector& a, const WittVector& b) {
  return combine(a, b, inv_poly_sub, false);
}

// Exponent at the field G (already raised), padded to length s+1.
DiskSeries exponent_at(const WittVector& w, int M) {
  const Field& G = *w.F;
  const int s = G.level();
  if (s < 0) throw std::invalid_argument("pi-exponential: needs a cyclotomic field K_s");
  if (w.length() > static_cast<std::size_t>(s) + 1) throw std::invalid_argument("pi-exponential: length exceeds s + 1");
  const auto phi = phantom_capped(w, static_cast<std::size_t>(s) + 1, M);
  const PAdic zero = PAdic::zero(G);
  DiskSeries g = DiskSeries::zero(G, zero, Rational(0), M);
  for (int j = 0; j <= s; ++j) {
    const PAdic k = pi_m(G, s - j);
    const long pj = ipow(G.p(), j);
    const auto& ph = phi[static_cast<std::size_t>(j)];
    for (std::size_t n = 0; n < ph.size() && n <= static_cast<std::size_t>(M); ++n) {
      if (ph[n].is_exact_zero()) continue;
      g.coeffs()[n] += (ph[n] * k).div_int(pj);
    }
  }
  return g;
}

int exp_extra_digits(const Field& F, int M) {
  return static_cast<int>(factorial_valuation(M, F.p())) + std::max(F.level(), 0) + 2;
}

DiskSeries series_to_field(const DiskSeries& f, const Field& F) {
  std::vector<PAdic> c;
  c.reserve(f.coeffs().size());
  for (const auto& x : f.coeffs()) c.push_back(x.to_field(F));
  return DiskSeries(F, PAdic::zero(F), f.log_radius(), std::move(c));
}

std::string inv_poly_str(const InvPoly& a) {
  std::ostringstream os;
  bool any = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].is_zero()) continue;
    if (any) os << " + ";
    os << "(" << a[k].str() << ")";
    if (k > 0) os << "*T^-" << k;
    any = true;
  }
  if (!any) os << "0";
  return os.str();
}

}  // namespace

InvPoly inv_poly_add(const InvPoly& a, const InvPoly& b) {
  InvPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

InvPoly inv_poly_sub(const InvPoly& a, const InvPoly& b) {
  InvPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

InvPoly inv_poly_mul(const InvPoly& a, const InvPoly& b) { return mul_capped(a, b, -1); }

InvPoly inv_poly_pow(const InvPoly& a, long n) {
  if (n < 0) throw std::invalid_argument("inv_poly_pow: negative exponent");
  if (n == 0) {
    if (a.empty() || !a[0].field()) throw std::invalid_argument("inv_poly_pow: 0th power of an unattached polynomial");
    return {PAdic::one(*a[0].field())};
  }
  return pow_capped(a, n, -1);
}

InvPoly inv_poly_scaled(const InvPoly& a, const PAdic& k) {
  InvPoly r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x.is_exact_zero() ? x : x * k);
  trim(r);
  return r;
}

bool inv_poly_is_zero(const InvPoly& a) {
  return std::all_of(a.begin(), a.end(), [](const PAdic& x) { return x.is_zero(); });
}

Ext inv_poly_min_valuation(const InvPoly& a) {
  Ext m = Ext::inf();
  for (const auto& x : a) m = min(m, x.valuation_bound());
  return m;
}

bool WittVector::is_integral() const {
  return std::all_of(f.begin(), f.end(), [](const InvPoly& c) { return !(inv_poly_min_valuation(c) < Ext(0)); });
}

std::string WittVector::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? ", " : "") << inv_poly_str(f[i]);
  os << ")";
  return os.str();
}

WittVector witt_zero(const Field& F, std::size_t length) { return WittVector{&F, std::vector<InvPoly>(length)}; }

std::vector<InvPoly> phantom(const WittVector& w) { return phantom_capped(w, w.length(), -1); }

WittVector witt_from_phantom(const Field& F, const std::vector<InvPoly>& phi, bool require_integral) {
  const Field& G = raised(F, static_cast<int>(phi.size()) + 1);
  std::vector<InvPoly> lifted;
  for (const auto& x : phi) lifted.push_back(lift(x, G));
  return drop(from_phantom_raw(G, lifted, require_integral), F);
}

WittVector witt_add(const WittVector& a, const WittVector& b) { return combine(a, b, inv_poly_add, true); }

WittVector witt_sub(const WittVector& a, const WittVector& b) { return combine(a, b, inv_poly_sub, true); }

WittVector witt_neg(const WittVector& a) { return witt_sub(witt_zero(*a.F, a.length()), a); }

WittVector witt_substitute_q(const WittVector& w, const PAdic& q) {
  const PAdic qi = q.inverse();
  WittVector r = w;
  for (auto& c : r.f) {
    PAdic m = PAdic::one(*w.F);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k > 0) m *= qi;
      if (!c[k].is_exact_zero()) c[k] *= m;
    }
  }
  return r;
}

DiskSeries pi_exponent(const WittVector& w, int M) {
  const Field& F = *w.F;
  const Field& G = raised(F, std::max(F.level(), 0) + 2);
  return series_to_field(exponent_at(lift(w, G), M), F);
}

PiExponential pi_exponential(const WittVector& w, int M) {
  if (!w.is_integral()) throw std::domain_error("pi_exponential: Witt vector is not integral");
  for (const auto& c : w.f)
    if (!c.empty() && !c[0].is_zero()) throw std::domain_error("pi_exponential: components must vanish at T = infinity");
  const Field& F = *w.F;
  const Field& G = raised(F, exp_extra_digits(F, M));
  PiExponential r;
  r.source = w;
  r.series = series_to_field(exp_series(exponent_at(lift(w, G), M)), F);
  const Ext v_pis(Rational(1, ipow(F.p(), std::max(F.level(), 0)) * (F.p() - 1)));
  r.in_pi_s_ball = true;
  for (int n = 1; n <= M; ++n)
    if (r.series[static_cast<std::size_t>(n)].valuation_bound() < v_pis) r.in_pi_s_ball = false;
  return r;
}

DifferentialEquation solvable_operator(const PAdic& a0, const WittVector& w, const DomainPtr& X, int M) {
  std::optional<std::size_t> hole;
  for (std::size_t i = 0; i < X->hole_count(); ++i)
    if (X->holes()[i].c.is_zero()) hole = i;
  if (!hole) throw DomainError("solvable_operator: domain needs a hole centered at 0");
  const DiskSeries g = pi_exponent(w, M);
  AnalyticFunction G1 = AnalyticFunction::constant(X, M, a0);
  for (int k = 1; k <= M; ++k) {
    const PAdic& gk = g[static_cast<std::size_t>(k)];
    if (gk.is_zero()) continue;
    G1 += AnalyticFunction::hole_term(X, M, *hole, k, gk.mul_int(-k));
  }
  return DifferentialEquation{X, FunctionMatrix(1, 1, G1)};
}

DifferentialEquation solvable_operator_at_infinity(const PAdic& a0, const WittVector& w, const DomainPtr& U, int M) {
  const DiskSeries g = pi_exponent(w, M);
  std::vector<PAdic> c(static_cast<std::size_t>(M) + 1, PAdic::zero(*w.F));
  c[0] = -a0;
  for (int k = 1; k <= M; ++k) c[static_cast<std::size_t>(k)] = g[static_cast<std::size_t>(k)].mul_int(k);
  return DifferentialEquation{U, FunctionMatrix(1, 1, AnalyticFunction::from_T_poly(U, M, c))};
}

std::string DeformedRankOne::str() const {
  std::ostringstream os;
  os << "A(q,T) = " << series.str() << "\n";
  os << "  min valuation (deg >= 1): " << min_valuation.str() << "\n";
  os << "  radius estimate in T^-1: " << radius.log_radius.str() << " (band " << rational_str(tolerance) << ")\n";
  os << "  integral: " << (integral ? "yes" : "no") << ", overconvergent: " << (overconvergent ? "yes" : "no");
  for (const auto& d : diagnostics) os << "\n  " << d;
  return os.str();
}

DeformedRankOne rank_one_deformed_matrix(const WittVector& w, const PAdic& q, int M) {
  const Field& F = *w.F;
  const PAdic one = PAdic::one(F);
  if (!((q - one).valuation() > Ext(0))) throw std::domain_error("rank_one_deformed_matrix: needs |q - 1| < 1");
  DeformedRankOne r;
  r.tolerance = estimator_tolerance(M, F.p());
  if ((q - one).is_zero()) {
    r.difference = witt_zero(F, w.length());
    r.series = DiskSeries::constant(F, PAdic::zero(F), Rational(0), M, PAdic::one(F));
  } else {
    r.difference = witt_sub_unchecked(witt_substitute_q(w, q), w);
    if (!r.difference.is_integral()) r.diagnostics.push_back("w(qT) - w(T) is not an integral Witt vector");
    const Field& G = raised(F, exp_extra_digits(F, M) + static_cast<int>(M));
    r.series = series_to_field(exp_series(exponent_at(lift(r.difference, G), M)), F);
  }
  for (int n = 1; n <= M; ++n) r.min_valuation = min(r.min_valuation, r.series[static_cast<std::size_t>(n)].valuation_bound());
  r.integral = !(r.min_valuation < Ext(0));
  r.radius = estimate_radius(r.series);
  r.overconvergent = r.radius.inconclusive || r.radius.log_radius > Ext(r.tolerance);
  if (!r.integral) r.diagnostics.push_back("a coefficient of A(q,T) has negative valuation");
  if (!r.overconvergent)
    r.diagnostics.push_back("radius estimate " + r.radius.log_radius.str() +
                            " in T^-1 is within the estimator band of 1: A(q,T) is not shown to overconverge");
  return r;
}

}  // namespace qconf
