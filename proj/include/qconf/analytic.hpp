#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qconf/affinoid.hpp"
#include "qconf/matrix.hpp"
#include "qconf/series.hpp"

namespace qconf {

using DomainPtr = std::shared_ptr<const Affinoid>;

struct NormResult {
  Ext log_norm = Ext::neg_inf();
  // The tail bound is not below the computed norm, so the value is only an
  // upper estimate of the stored part.
  bool truncation_limited = false;
};

// Element of H_K(X) in Mittag-Leffler form:
//   f = sum_{k<=M} a_k (T - c_0)^k + sum_i sum_{1<=k<=M} b_{i,k} (T - c_i)^{-k} + tail
// where ||tail||_X <= p^tail. tail = -inf means the stored part is exact,
// +inf means no bound is known.
class AnalyticFunction {
 public:
  AnalyticFunction() = default;
  AnalyticFunction(DomainPtr X, int M);

  static AnalyticFunction zero(DomainPtr X, int M) { return AnalyticFunction(std::move(X), M); }
  static AnalyticFunction constant(DomainPtr X, int M, const PAdic& a);
  // The coordinate T.
  static AnalyticFunction coordinate(DomainPtr X, int M);
  // sum_k a_k (T - c_0)^k
  static AnalyticFunction from_poly(DomainPtr X, int M, const std::vector<PAdic>& a);
  // sum_k a_k T^k, re-expanded around c_0.
  static AnalyticFunction from_T_poly(DomainPtr X, int M, const std::vector<PAdic>& a);
  // b (T - c_i)^{-k}, hole index i counted from 0.
  static AnalyticFunction hole_term(DomainPtr X, int M, std::size_t i, int k, const PAdic& b);

  const Affinoid& domain() const { return *X_; }
  const DomainPtr& domain_ptr() const { return X_; }
  const Field& field() const { return X_->field(); }
  int order() const { return M_; }

  const std::vector<PAdic>& poly() const { return a_; }
  std::vector<PAdic>& poly() { return a_; }
  // holes()[i][k-1] = b_{i,k}
  const std::vector<std::vector<PAdic>>& holes() const { return b_; }
  std::vector<std::vector<PAdic>>& holes() { return b_; }
  const Ext& tail() const { return tail_; }
  void set_tail(const Ext& t) { tail_ = t; }

  AnalyticFunction operator-() const;
  friend AnalyticFunction operator+(const AnalyticFunction& f, const AnalyticFunction& g);
  friend AnalyticFunction operator-(const AnalyticFunction& f, const AnalyticFunction& g);
  friend AnalyticFunction operator*(const AnalyticFunction& f, const AnalyticFunction& g);
  AnalyticFunction& operator+=(const AnalyticFunction& g) { return *this = *this + g; }
  AnalyticFunction& operator*=(const AnalyticFunction& g) { return *this = *this * g; }
  AnalyticFunction scaled(const PAdic& k) const;
  AnalyticFunction plus_constant(const PAdic& k) const;

  // f(qT); needs x -> qx to preserve X.
  AnalyticFunction sigma(const PAdic& q) const;
  AnalyticFunction derivative() const;
  // T d/dT
  AnalyticFunction delta1() const;
  // (sigma_q f - f) / ((q - 1) T)
  AnalyticFunction d_q(const PAdic& q) const;
  // sigma_q o d/dT
  AnalyticFunction D_q(const PAdic& q) const;
  // sigma_q o delta_1
  AnalyticFunction delta_q(const PAdic& q) const;
  // g with f = (T - a) g + r; r = f(a) when a is in X and 0 otherwise.
  std::pair<AnalyticFunction, PAdic> div_linear(const PAdic& a) const;
  // Multiplicative inverse by Newton iteration; needs a dominant constant.
  AnalyticFunction inverse() const;
  // f(T^p) on the domain {x : x^p in X}; X must be centered at 0.
  AnalyticFunction frobenius_substitute(int p, DomainPtr target) const;
  // Same function with another truncation order (padding is exact).
  AnalyticFunction with_order(int M) const;

  PAdic evaluate(const PAdic& x) const;
  // Gauss norm |f|_{(c, rho)}, (c, rho) a generic point of X.
  NormResult gauss_norm(const PAdic& c, const Rational& log_rho) const;
  // max over the Shilov boundary.
  NormResult sup_norm() const;
  // Taylor expansion at c in X, order M', radius rho_{c,X}.
  DiskSeries taylor_at(const PAdic& c, int order) const;
  // Bound max_k |coef| times the Shilov radius power; dominates the stored part.
  Ext norm_bound() const;
  // min over stored coefficients of (valuation bound - log of the Shilov
  // radius power); used to compare functions coefficientwise.
  Ext difference_valuation() const;
  bool is_exact_zero() const;

  std::string str(int terms = 4) const;

 private:
  DomainPtr X_;
  int M_ = 0;
  std::vector<PAdic> a_;
  std::vector<std::vector<PAdic>> b_;
  Ext tail_ = Ext::neg_inf();
};

using FunctionMatrix = Matrix<AnalyticFunction>;

FunctionMatrix identity_matrix(const DomainPtr& X, int M, std::size_t n);
FunctionMatrix zero_matrix(const DomainPtr& X, int M, std::size_t rows, std::size_t cols);
FunctionMatrix constant_matrix(const DomainPtr& X, int M, const Matrix<PAdic>& c);
FunctionMatrix scaled(const FunctionMatrix& m, const PAdic& k);
FunctionMatrix sigma(const FunctionMatrix& m, const PAdic& q);
FunctionMatrix derivative(const FunctionMatrix& m);
FunctionMatrix delta1(const FunctionMatrix& m);
FunctionMatrix d_q(const FunctionMatrix& m, const PAdic& q);
FunctionMatrix D_q(const FunctionMatrix& m, const PAdic& q);
// Division of every entry by (T - a), discarding residuals.
FunctionMatrix div_linear(const FunctionMatrix& m, const PAdic& a);
AnalyticFunction determinant(const FunctionMatrix& m);
// Adjugate over the determinant; throws std::domain_error when det is not
// invertible in the truncated ring.
FunctionMatrix inverse(const FunctionMatrix& m);
Matrix<PAdic> evaluate(const FunctionMatrix& m, const PAdic& x);
NormResult gauss_norm(const FunctionMatrix& m, const PAdic& c, const Rational& log_rho);
NormResult sup_norm(const FunctionMatrix& m);
// min over entries of difference_valuation
Ext difference_valuation(const FunctionMatrix& m);
Ext tail_bound(const FunctionMatrix& m);

}  // namespace qconf
