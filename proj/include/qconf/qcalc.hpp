#pragma once

#include <vector>

#include "qconf/report.hpp"
#include "qconf/series.hpp"

namespace qconf {

// [n]_q = 1 + q + ... + q^{n-1}
PAdic q_integer(long n, const PAdic& q);
// prod_{k=2..n} [k]_q; exact zero at roots of unity of order <= n.
PAdic q_factorial(long n, const PAdic& q);
// From the expansion of (1 - T)(1 - qT)...(1 - q^{n-1}T).
PAdic q_binomial(long n, long i, const PAdic& q);
// All binom(n, i)_q for i = 0..n.
std::vector<PAdic> q_binomial_row(long n, const PAdic& q);

struct QContext {
  QContext(PAdic q, PAdic c, int M);
  PAdic q;
  PAdic c;
  int M;
  QMembership membership;
};

struct TwistedSeries {
  QContext ctx;
  // coefficients in the basis (T - c)_{q,n}
  std::vector<PAdic> coeffs;
  // least n with a nonzero coefficient, -1 for zero
  int order() const;
};

// (T - c)_{q,n} = (T - c)(T - qc)...(T - q^{n-1}c) expanded in (T - c)^k.
DiskSeries twisted_monomial(int n, const QContext& ctx, const Rational& log_r = Rational(0));

// Triangular change of basis between (T - c)^n and (T - c)_{q,n}, n <= M.
class TwistedBasis {
 public:
  explicit TwistedBasis(const QContext& ctx);

  const QContext& context() const { return ctx_; }
  // b_tilde(n, i): coefficient of (T - c)^i in (T - c)_{q,n}
  const PAdic& b_tilde(int n, int i) const { return bt_[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)]; }

  TwistedSeries to_twisted(const DiskSeries& f) const;
  DiskSeries from_twisted(const TwistedSeries& g, const Rational& log_r = Rational(0)) const;

 private:
  QContext ctx_;
  std::vector<std::vector<PAdic>> bt_;
};

TwistedSeries to_twisted(const DiskSeries& f, const QContext& ctx);
DiskSeries from_twisted(const TwistedSeries& g);

// sup_n |a_n| rho^n in the twisted basis; refuses (std::domain_error) when
// |q - 1||c| >= rho, where it no longer equals the Gauss norm.
Ext twisted_gauss_norm(const TwistedSeries& g, const Rational& log_rho);

// d_q on a polynomial written as a DiskSeries.
DiskSeries poly_d_q(const DiskSeries& f, const PAdic& q);
// f(qT) for a polynomial, with no convergence condition.
DiskSeries poly_sigma(const DiskSeries& f, const PAdic& q);

// d_q^n(f)(c) / [n]_q!, refusing roots of unity.
TwistedSeries twisted_taylor_coeffs(const DiskSeries& f, const QContext& ctx);

// Both sides of d_q^n(fg) = sum_i binom(n,i)_q d_q^{n-i}(f)(q^i T) d_q^i(g)(T).
VerificationReport q_leibniz_check(const DiskSeries& f, const DiskSeries& g, int n, const QContext& ctx,
                                   const Ext& threshold);

}  // namespace qconf
