#pragma once

#include <string>
#include <vector>

#include "qconf/padic.hpp"

namespace qconf {

// Truncated expansion sum_{n<=M} a_n (T - c)^n on D^-(c, R).
class DiskSeries {
 public:
  DiskSeries() = default;
  DiskSeries(const Field& F, PAdic center, Rational log_r, std::vector<PAdic> coeffs);

  static DiskSeries zero(const Field& F, const PAdic& c, const Rational& log_r, int M);
  static DiskSeries constant(const Field& F, const PAdic& c, const Rational& log_r, int M, const PAdic& a);
  // T - c
  static DiskSeries variable(const Field& F, const PAdic& c, const Rational& log_r, int M);
  // T itself, written around c.
  static DiskSeries identity(const Field& F, const PAdic& c, const Rational& log_r, int M);

  const Field& field() const { return *F_; }
  const PAdic& center() const { return c_; }
  const Rational& log_radius() const { return log_r_; }
  int order() const { return static_cast<int>(a_.size()) - 1; }
  const std::vector<PAdic>& coeffs() const { return a_; }
  std::vector<PAdic>& coeffs() { return a_; }
  const PAdic& operator[](std::size_t n) const { return a_[n]; }

  // log_p |f|_{(c, rho)} over stored coefficients.
  Ext log_gauss_norm(const Rational& log_rho) const;
  // min_n (v(a_n) - n log rho), inexact zeros counted at their precision.
  Ext gauss_valuation_bound(const Rational& log_rho) const;
  // Plain min over coefficient valuation bounds.
  Ext min_valuation() const;

  DiskSeries operator-() const;
  friend DiskSeries operator+(const DiskSeries& f, const DiskSeries& g);
  friend DiskSeries operator-(const DiskSeries& f, const DiskSeries& g);
  friend DiskSeries operator*(const DiskSeries& f, const DiskSeries& g);
  DiskSeries scaled(const PAdic& k) const;
  DiskSeries truncated(int M) const;
  // Pads or truncates to order M (padding is exact for polynomials only).
  DiskSeries resized(int M) const;

  PAdic evaluate(const PAdic& x) const;
  DiskSeries derivative() const;
  // T d/dT
  DiskSeries delta1() const;
  // f(qT) re-expanded around the same center; needs |q-1||c| < R.
  DiskSeries sigma(const PAdic& q) const;
  // The same function expanded around c2, |c2 - c| < R.
  DiskSeries recentered(const PAdic& c2) const;
  // f(g) for g with g(c) = 0 in its own variable; the result lives at g's center.
  DiskSeries compose(const DiskSeries& g) const;
  // 1/f, constant term nonzero.
  DiskSeries inverse() const;
  // Substitution c + (T - c) -> x^k-type maps are handled by callers.

  std::string str(int terms = 6) const;

 private:
  const Field* F_ = nullptr;
  PAdic c_;
  Rational log_r_{0};
  std::vector<PAdic> a_;
};

// Formal exp(g) and log(1 + g); g must vanish at the center.
DiskSeries exp_series(const DiskSeries& g);
DiskSeries log1p_series(const DiskSeries& g);
// exp_series with a check that |g(c)| < omega and coefficient margin.
DiskSeries exp_series_certified(const DiskSeries& g);

struct RadiusEstimate {
  Ext log_radius = Ext::inf();  // lower estimate, log_p
  bool inconclusive = false;    // every coefficient in the window vanished
  int window_lo = 0;
  int window_hi = 0;
  int argmin = -1;
  Ext min_ratio = Ext::inf();  // min over window of v(a_n)/n
  Ext max_ratio = Ext::neg_inf();
  // (v(a_hi) - v(a_lo)) / (hi - lo) between the last and first nonzero terms.
  Ext slope = Ext::inf();
  std::string str() const;
};

// Windowed estimator on a valuation sequence v_0..v_M (v_n = +inf for zero).
RadiusEstimate estimate_from_valuations(const std::vector<Ext>& v);
// Coefficient-valuation version of the above; the radius is about the center.
RadiusEstimate estimate_radius(const DiskSeries& f);
// Width of the estimator's uncertainty band in log_p units, a rational upper
// bound for (log_p M + 1) / (M / 2).
Rational estimator_tolerance(int M, int p);

// Coefficients of P(Z + gamma) from those of P(Z).
std::vector<PAdic> taylor_shift(const std::vector<PAdic>& a, const PAdic& gamma);

// Integer binomial C(n, k) as a field element.
PAdic binomial(const Field& F, long n, long k);

}  // namespace qconf
