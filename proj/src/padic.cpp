#include "qconf/padic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace qconf {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

unsigned long remove_p(mpz_class& t, const mpz_class& x, const mpz_class& p) {
  return mpz_remove(t.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
}

}  // namespace

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field::Field(int p, int s, int N) : p_(p), s_(s), N_(N) {
  if (!is_prime(p)) throw std::invalid_argument("make_field: p = " + std::to_string(p) + " is not prime");
  if (N < 1) throw std::invalid_argument("make_field: precision must be >= 1");
  if (s < -1) throw std::invalid_argument("make_field: extension level must be >= -1");

  // Exact minimal polynomial of pi over Z.
  std::vector<mpz_class> exact;
  if (s == -1) {
    e_ = 1;
    exact = {mpz_class(-p)};
  } else {
    long deg = p - 1;
    for (int i = 0; i < s; ++i) {
      deg *= p;
      if (deg > kMaxDegree) break;
    }
    if (deg > kMaxDegree)
      throw std::invalid_argument("make_field: K_" + std::to_string(s) + " over Q_" + std::to_string(p) +
                                  " exceeds the supported degree " + std::to_string(kMaxDegree));
    e_ = static_cast<int>(deg);
    const long step = deg / (p - 1);  // p^s
    // Phi(1 + X) = sum_{k<p} (1 + X)^{k p^s}
    std::vector<mpz_class> phi(static_cast<std::size_t>(e_) + 1, 0);
    for (long k = 0; k < p; ++k) {
      const long n = k * step;
      mpz_class b = 1;
      for (long j = 0; j <= n; ++j) {
        phi[static_cast<std::size_t>(j)] += b;
        b = b * (n - j) / (j + 1);
      }
    }
    if (phi[static_cast<std::size_t>(e_)] != 1 || phi[0] != p)
      throw std::logic_error("cyclotomic polynomial is not Eisenstein");
    exact.assign(phi.begin(), phi.begin() + e_);
  }

  pow_p_.resize(static_cast<std::size_t>(N_) + 2);
  pow_p_[0] = 1;
  for (int k = 1; k <= N_ + 1; ++k) pow_p_[static_cast<std::size_t>(k)] = pow_p_[static_cast<std::size_t>(k - 1)] * p_;

  c_ = exact;
  reduce(c_);
  Digits eta(static_cast<std::size_t>(e_));
  for (int i = 0; i < e_; ++i) eta[static_cast<std::size_t>(i)] = -exact[static_cast<std::size_t>(i)] / p_;
  reduce(eta);
  const Digits eps = unit_inverse(eta);
  eta_pow_.push_back(one());
  eps_pow_.push_back(one());
  for (int m = 1; m <= N_; ++m) {
    eta_pow_.push_back(mul(eta_pow_.back(), eta));
    eps_pow_.push_back(mul(eps_pow_.back(), eps));
  }
}

std::string Field::str() const {
  std::ostringstream os;
  if (s_ < 0)
    os << "Q_" << p_;
  else
    os << "Q_" << p_ << "(zeta_" << p_ << "^" << (s_ + 1) << ")";
  os << " @" << N_;
  return os.str();
}

Digits Field::one() const {
  Digits d(static_cast<std::size_t>(e_));
  d[0] = 1;
  return d;
}

void Field::reduce(Digits& a) const {
  const mpz_class& m = modulus();
  for (auto& x : a) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
}

Digits Field::add(const Digits& a, const Digits& b) const {
  Digits r(static_cast<std::size_t>(e_));
  for (int i = 0; i < e_; ++i) r[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)];
  reduce(r);
  return r;
}

Digits Field::neg(const Digits& a) const {
  Digits r(static_cast<std::size_t>(e_));
  for (int i = 0; i < e_; ++i) r[static_cast<std::size_t>(i)] = -a[static_cast<std::size_t>(i)];
  reduce(r);
  return r;
}

Digits Field::scale(const Digits& a, const mpz_class& k) const {
  Digits r(static_cast<std::size_t>(e_));
  for (int i = 0; i < e_; ++i) r[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] * k;
  reduce(r);
  return r;
}

Digits Field::mul(const Digits& a, const Digits& b) const {
  const auto e = static_cast<std::size_t>(e_);
  if (e == 1) {
    Digits r{a[0] * b[0]};
    reduce(r);
    return r;
  }
  std::vector<mpz_class> r(2 * e - 1, 0);
  for (std::size_t i = 0; i < e; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < e; ++j) r[i + j] += a[i] * b[j];
  }
  const mpz_class& m = modulus();
  for (std::size_t k = 2 * e - 2; k >= e; --k) {
    mpz_class t = r[k];
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
    if (t != 0)
      for (std::size_t i = 0; i < e; ++i) r[k - e + i] -= t * c_[i];
  }
  r.resize(e);
  reduce(r);
  return r;
}

Digits Field::shift_once(const Digits& a) const {
  const auto e = static_cast<std::size_t>(e_);
  Digits r(e);
  const mpz_class top = a[e - 1];
  for (std::size_t i = e - 1; i > 0; --i) r[i] = a[i - 1];
  r[0] = 0;
  for (std::size_t i = 0; i < e; ++i) r[i] -= top * c_[i];
  reduce(r);
  return r;
}

Digits Field::mul_pi_pow(const Digits& a, std::int64_t k) const {
  if (k < 0) throw std::logic_error("mul_pi_pow: negative exponent");
  if (k == 0) return a;
  const std::int64_t m = k / e_;
  const std::int64_t r = k % e_;
  if (m >= N_) return Digits(static_cast<std::size_t>(e_), 0);
  Digits out = a;
  if (m > 0) {
    out = scale(out, pow_p_[static_cast<std::size_t>(m)]);
    if (e_ > 1) out = mul(out, eta_pow_[static_cast<std::size_t>(m)]);
  }
  for (std::int64_t i = 0; i < r; ++i) out = shift_once(out);
  return out;
}

std::int64_t Field::vec_valuation(const Digits& a) const {
  std::int64_t best = -1;
  const mpz_class P(p_);
  mpz_class t;
  for (int i = 0; i < e_; ++i) {
    const mpz_class& x = a[static_cast<std::size_t>(i)];
    if (x == 0) continue;
    const auto m = static_cast<std::int64_t>(remove_p(t, x, P));
    const std::int64_t v = m * e_ + i;
    if (best < 0 || v < best) best = v;
  }
  return best;
}

Digits Field::div_pi_pow(const Digits& a, std::int64_t w) const {
  if (w == 0) return a;
  const mpz_class P(p_);
  Digits out(static_cast<std::size_t>(e_), 0);
  mpz_class t;
  for (int i = 0; i < e_; ++i) {
    const mpz_class& x = a[static_cast<std::size_t>(i)];
    if (x == 0) continue;
    const auto m = static_cast<std::int64_t>(remove_p(t, x, P));
    const std::int64_t j = m * e_ + i - w;
    if (j < 0) throw std::logic_error("div_pi_pow: vector not divisible");
    const std::int64_t aa = j / e_;
    const std::int64_t r = j % e_;
    Digits term(static_cast<std::size_t>(e_), 0);
    term[0] = t * pow_p_[static_cast<std::size_t>(std::min<std::int64_t>(aa, N_))];
    reduce(term);
    const std::int64_t ke = m - aa;
    if (e_ > 1 && ke > 0) term = mul(term, eps_power(ke));
    for (std::int64_t q = 0; q < r; ++q) term = shift_once(term);
    for (int k = 0; k < e_; ++k) out[static_cast<std::size_t>(k)] += term[static_cast<std::size_t>(k)];
  }
  reduce(out);
  return out;
}

Digits Field::eps_power(std::int64_t m) const {
  if (m <= N_) return eps_pow_[static_cast<std::size_t>(m)];
  Digits r = eps_pow_[static_cast<std::size_t>(N_)];
  for (std::int64_t k = N_; k < m; ++k) r = mul(r, eps_pow_[1]);
  return r;
}

Digits Field::unit_inverse(const Digits& u) const {
  mpz_class u0 = u[0];
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), u0.get_mpz_t(), modulus().get_mpz_t()) == 0)
    throw std::domain_error("unit_inverse: not a unit");
  Digits y(static_cast<std::size_t>(e_), 0);
  y[0] = inv;
  if (e_ == 1) return y;
  const Digits target = one();
  Digits two(static_cast<std::size_t>(e_), 0);
  two[0] = 2;
  for (int it = 0; it < 64; ++it) {
    const Digits uy = mul(u, y);
    if (uy == target) return y;
    y = mul(y, add(two, neg(uy)));
  }
  throw std::logic_error("unit_inverse: Newton iteration did not converge");
}

void Field::canonicalize(Digits& u, std::int64_t rel) const {
  for (int i = 0; i < e_; ++i) {
    const std::int64_t k = ceil_div(rel - i, e_);
    mpz_class& x = u[static_cast<std::size_t>(i)];
    if (k <= 0)
      x = 0;
    else if (k < N_)
      mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), pow_p_[static_cast<std::size_t>(k)].get_mpz_t());
    else
      mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), modulus().get_mpz_t());
  }
}

const Field& make_field(int p, int s, int N) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<Field>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, s, N);
  auto it = registry.find(key);
  if (it != registry.end()) return *it->second;
  auto f = std::make_unique<Field>(p, s, N);
  const Field& ref = *f;
  registry.emplace(key, std::move(f));
  return ref;
}

// ---------------------------------------------------------------------------

PAdic PAdic::zero(const Field& F) {
  PAdic z;
  z.F_ = &F;
  return z;
}

PAdic PAdic::inexact_zero(const Field& F, std::int64_t abs_pi) {
  PAdic z;
  z.F_ = &F;
  z.exact_ = false;
  z.v_ = abs_pi;
  return z;
}

PAdic PAdic::from_parts(const Field& F, std::int64_t pi_val, Digits unit, std::int64_t rel) {
  rel = std::min(rel, F.cap());
  if (rel <= 0) return inexact_zero(F, pi_val + std::max<std::int64_t>(rel, 0));
  const std::int64_t w = F.vec_valuation(unit);
  if (w < 0 || w >= rel) return inexact_zero(F, pi_val + rel);
  if (w > 0) unit = F.div_pi_pow(unit, w);
  PAdic x;
  x.F_ = &F;
  x.v_ = pi_val + w;
  x.rel_ = rel - w;
  x.exact_ = false;
  F.canonicalize(unit, x.rel_);
  x.u_ = std::move(unit);
  return x;
}

PAdic PAdic::from_int(const Field& F, const mpz_class& n) {
  if (n == 0) return zero(F);
  mpz_class t;
  const auto m = static_cast<std::int64_t>(remove_p(t, n, mpz_class(F.p())));
  Digits u(static_cast<std::size_t>(F.e()), 0);
  u[0] = t;
  if (F.e() > 1 && m > 0) {
    // p^m = pi^{em} * eps^m with eps = p / pi^e.
    u = F.mul(u, F.eps_power(m));
  } else {
    u = F.scale(u, 1);
  }
  PAdic x;
  x.F_ = &F;
  x.v_ = m * F.e();
  x.rel_ = F.cap();
  x.exact_ = false;
  F.canonicalize(u, x.rel_);
  x.u_ = std::move(u);
  return x;
}

PAdic PAdic::from_rational(const Field& F, const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("from_rational: zero denominator");
  return from_int(F, num) / from_int(F, den);
}

PAdic PAdic::from_rational(const Field& F, const Rational& r) {
  return from_rational(F, mpz_class(static_cast<long>(r.numerator())), mpz_class(static_cast<long>(r.denominator())));
}

PAdic PAdic::uniformizer(const Field& F) {
  PAdic x;
  x.F_ = &F;
  x.v_ = 1;
  x.rel_ = F.cap();
  x.exact_ = false;
  x.u_ = F.one();
  return x;
}

PAdic PAdic::from_pi_poly(const Field& F, const std::vector<Rational>& coeffs) {
  PAdic acc = zero(F);
  PAdic pw = one(F);
  const PAdic pi = uniformizer(F);
  for (const auto& a : coeffs) {
    if (a.numerator() != 0) acc += from_rational(F, a) * pw;
    pw *= pi;
  }
  return acc;
}

const Field* PAdic::join(const PAdic& a, const PAdic& b) {
  if (a.F_ && b.F_ && a.F_ != b.F_)
    throw std::invalid_argument("mixing elements of " + a.F_->str() + " and " + b.F_->str());
  return a.F_ ? a.F_ : b.F_;
}

Ext PAdic::valuation() const {
  if (is_zero()) return Ext::inf();
  return Ext(Rational(v_, F_->e()));
}

Ext PAdic::valuation_exact() const {
  if (is_zero() && !exact_) throw PrecisionError("precision exhausted: element is O(" + absolute_precision().str() + ")");
  return valuation();
}

Ext PAdic::absolute_precision() const {
  if (is_exact_zero()) return Ext::inf();
  return Ext(Rational(absolute_pi_precision(), F_->e()));
}

Ext PAdic::valuation_bound() const {
  if (is_exact_zero()) return Ext::inf();
  if (is_zero()) return absolute_precision();
  return valuation();
}

std::int64_t PAdic::pi_valuation() const {
  if (is_zero()) throw PrecisionError("pi_valuation of zero");
  return v_;
}

std::int64_t PAdic::absolute_pi_precision() const {
  if (is_exact_zero()) throw std::logic_error("absolute precision of exact zero is infinite");
  return is_zero() ? v_ : v_ + rel_;
}

PAdic PAdic::operator-() const {
  if (is_zero()) return *this;
  PAdic x = *this;
  x.u_ = F_->neg(u_);
  F_->canonicalize(x.u_, x.rel_);
  return x;
}

PAdic operator+(const PAdic& a, const PAdic& b) {
  const Field* F = PAdic::join(a, b);
  if (a.is_exact_zero()) return b.F_ ? b : PAdic();
  if (b.is_exact_zero()) return a;
  const std::int64_t abs = std::min(a.absolute_pi_precision(), b.absolute_pi_precision());
  if (a.is_zero() || b.is_zero()) {
    const PAdic& y = a.is_zero() ? b : a;
    if (y.is_zero() || y.v_ >= abs) return PAdic::inexact_zero(*F, abs);
    PAdic r = y;
    r.rel_ = abs - y.v_;
    F->canonicalize(r.u_, r.rel_);
    return r;
  }
  const PAdic& lo = a.v_ <= b.v_ ? a : b;
  const PAdic& hi = a.v_ <= b.v_ ? b : a;
  const std::int64_t v = lo.v_;
  const std::int64_t delta = hi.v_ - v;
  if (delta >= abs - v) {
    PAdic r = lo;
    r.rel_ = abs - v;
    F->canonicalize(r.u_, r.rel_);
    return r;
  }
  Digits s = F->add(lo.u_, F->mul_pi_pow(hi.u_, delta));
  return PAdic::from_parts(*F, v, std::move(s), abs - v);
}

PAdic operator-(const PAdic& a, const PAdic& b) { return a + (-b); }

PAdic operator*(const PAdic& a, const PAdic& b) {
  const Field* F = PAdic::join(a, b);
  if (a.is_exact_zero() || b.is_exact_zero()) return F ? PAdic::zero(*F) : PAdic();
  if (a.is_zero() && b.is_zero()) return PAdic::inexact_zero(*F, a.v_ + b.v_);
  if (a.is_zero()) return PAdic::inexact_zero(*F, a.v_ + b.v_);
  if (b.is_zero()) return PAdic::inexact_zero(*F, a.v_ + b.v_);
  PAdic r;
  r.F_ = F;
  r.exact_ = false;
  r.v_ = a.v_ + b.v_;
  r.rel_ = std::min(a.rel_, b.rel_);
  r.u_ = F->mul(a.u_, b.u_);
  F->canonicalize(r.u_, r.rel_);
  return r;
}

PAdic PAdic::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero" + std::string(exact_ ? "" : " (precision exhausted)"));
  PAdic r;
  r.F_ = F_;
  r.exact_ = false;
  r.v_ = -v_;
  r.rel_ = rel_;
  r.u_ = F_->unit_inverse(u_);
  F_->canonicalize(r.u_, r.rel_);
  return r;
}

PAdic operator/(const PAdic& a, const PAdic& b) { return a * b.inverse(); }

PAdic PAdic::pow(std::int64_t n) const {
  if (n < 0) return inverse().pow(-n);
  if (n == 0) {
    if (!F_) throw std::invalid_argument("pow: field-less zero");
    return one(*F_);
  }
  PAdic base = *this;
  PAdic acc = one(*F_);
  while (n > 0) {
    if (n & 1) acc *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return acc;
}

PAdic PAdic::mul_int(long k) const {
  if (!F_) return *this;
  return *this * from_int(*F_, k);
}

PAdic PAdic::div_int(long k) const {
  if (!F_) return *this;
  return *this / from_int(*F_, k);
}

bool PAdic::identical(const PAdic& o) const {
  if (is_exact_zero() || o.is_exact_zero()) return is_exact_zero() && o.is_exact_zero();
  return F_ == o.F_ && v_ == o.v_ && rel_ == o.rel_ && exact_ == o.exact_ && u_ == o.u_;
}

PAdic PAdic::to_field(const Field& G) const {
  if (!F_) return *this;
  if (F_->p() != G.p() || F_->level() != G.level()) throw std::invalid_argument("to_field: different tower");
  if (is_exact_zero()) return zero(G);
  if (is_zero()) return inexact_zero(G, v_);
  Digits u = u_;
  const std::int64_t rel = std::min(rel_, G.cap());
  const mpz_class& m = G.modulus();
  for (auto& x : u) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  PAdic r;
  r.F_ = &G;
  r.exact_ = false;
  r.v_ = v_;
  r.rel_ = rel;
  G.canonicalize(u, rel);
  r.u_ = std::move(u);
  return r;
}

namespace {

// a/b with |a|, |b| <= sqrt(m/2) and a = b x mod m, b a unit mod m.
bool rational_reconstruction(const mpz_class& x, const mpz_class& m, mpz_class& a, mpz_class& b) {
  mpz_class bound = m / 2;
  mpz_sqrt(bound.get_mpz_t(), bound.get_mpz_t());
  mpz_class r0 = m, r1 = x, t0 = 0, t1 = 1;
  while (r1 > bound) {
    const mpz_class q = r0 / r1;
    mpz_class t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = t0 - q * t1;
    t0 = t1;
    t1 = t;
  }
  if (t1 < 0) {
    t1 = -t1;
    r1 = -r1;
  }
  if (t1 == 0 || t1 > bound) return false;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), t1.get_mpz_t(), m.get_mpz_t());
  if (g != 1) return false;
  a = r1;
  b = t1;
  return true;
}

}  // namespace

PAdic PAdic::padded_to(const Field& G) const {
  if (!F_) return *this;
  if (F_->p() != G.p() || F_->level() != G.level()) throw std::invalid_argument("padded_to: different tower");
  if (is_zero()) return zero(G);
  Digits u = u_;
  const int e = F_->e();
  for (int i = 0; i < e; ++i) {
    const std::int64_t k = std::min<std::int64_t>(ceil_div(rel_ - i, e), F_->precision());
    if (k <= 0) continue;
    mpz_class& x = u[static_cast<std::size_t>(i)];
    mpz_class a, b;
    if (!rational_reconstruction(x, F_->pow_p(static_cast<int>(k)), a, b)) continue;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), b.get_mpz_t(), G.modulus().get_mpz_t());
    x = a * inv;
  }
  PAdic r;
  r.F_ = &G;
  r.exact_ = false;
  r.v_ = v_;
  r.rel_ = G.cap();
  G.canonicalize(u, r.rel_);
  r.u_ = std::move(u);
  return r;
}

std::string PAdic::str() const {
  if (is_exact_zero()) return "0";
  const char* sym = F_->e() == 1 ? "p" : "pi";
  std::ostringstream os;
  if (is_zero()) {
    os << "O(" << sym << "^" << v_ << ")";
    return os.str();
  }
  if (F_->e() == 1) {
    os << u_[0].get_str();
  } else {
    os << "(";
    bool first = true;
    for (int i = 0; i < F_->e(); ++i) {
      if (u_[static_cast<std::size_t>(i)] == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << u_[static_cast<std::size_t>(i)].get_str();
      if (i > 0) os << "*pi^" << i;
    }
    os << ")";
  }
  if (v_ != 0) os << "*" << sym << "^" << v_;
  os << " + O(" << sym << "^" << (v_ + rel_) << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

Rational log_omega(int p) { return Rational(-1, p - 1); }

PAdic zeta(const Field& F) {
  if (F.level() < 0) throw std::invalid_argument("zeta: base field has no cyclotomic generator");
  return PAdic::one(F) + PAdic::uniformizer(F);
}

PAdic pi_m(const Field& F, int m) {
  if (m < 0 || m > F.level())
    throw std::invalid_argument("pi_m: index " + std::to_string(m) + " outside 0.." + std::to_string(F.level()));
  PAdic z = zeta(F);
  for (int k = 0; k < F.level() - m; ++k) z = z.pow(F.p());
  return z - PAdic::one(F);
}

std::string QMembership::str() const {
  switch (kind) {
    case Kind::not_unit_norm: return "not_unit_norm";
    case Kind::in_unit_disk: return "in_D(1,1)";
    case Kind::root_of_unity: return "root_of_unity(" + std::to_string(order) + ")";
    case Kind::generic: return "generic";
  }
  return "?";
}

QMembership q_membership(const PAdic& q, int max_k) {
  QMembership r;
  r.log_abs_q = q.log_abs();
  if (!q.field()) {
    r.kind = QMembership::Kind::not_unit_norm;
    r.log_abs_q_minus_1 = Ext(0);
    return r;
  }
  const Field& F = *q.field();
  const PAdic one = PAdic::one(F);
  r.log_abs_q_minus_1 = (q - one).log_abs();
  if (!(r.log_abs_q == Ext(0))) {
    r.kind = QMembership::Kind::not_unit_norm;
    return r;
  }
  // Roots of unity in K_s have order a * p^k with a | p - 1.
  std::vector<std::int64_t> orders;
  std::int64_t pk = 1;
  for (int k = 0; k <= max_k; ++k) {
    for (long a = 1; a <= F.p() - 1; ++a)
      if ((F.p() - 1) % a == 0) orders.push_back(a * pk);
    pk *= F.p();
  }
  std::sort(orders.begin(), orders.end());
  for (std::int64_t m : orders) {
    if ((q.pow(m) - one).is_zero()) {
      r.kind = QMembership::Kind::root_of_unity;
      r.order = m;
      return r;
    }
  }
  r.kind = r.log_abs_q_minus_1 < Ext(0) ? QMembership::Kind::in_unit_disk : QMembership::Kind::generic;
  return r;
}

bool is_root_of_unity(const PAdic& q, int max_k) {
  return q_membership(q, max_k).kind == QMembership::Kind::root_of_unity;
}

}  // namespace qconf
