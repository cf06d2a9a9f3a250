#pragma once

#include <string>
#include <vector>

#include "qconf/equations.hpp"

namespace qconf {

// sum_k a[k] T^{-k}; the module works in u = T^{-1}, so this is a polynomial
// in u.
using InvPoly = std::vector<PAdic>;

InvPoly inv_poly_add(const InvPoly& a, const InvPoly& b);
InvPoly inv_poly_sub(const InvPoly& a, const InvPoly& b);
InvPoly inv_poly_mul(const InvPoly& a, const InvPoly& b);
InvPoly inv_poly_pow(const InvPoly& a, long n);
InvPoly inv_poly_scaled(const InvPoly& a, const PAdic& k);
bool inv_poly_is_zero(const InvPoly& a);
// min over coefficients of the valuation bound (+inf for zero)
Ext inv_poly_min_valuation(const InvPoly& a);

// (f_0, ..., f_{len-1}) over the field F.
struct WittVector {
  const Field* F = nullptr;
  std::vector<InvPoly> f;

  std::size_t length() const { return f.size(); }
  bool is_integral() const;
  std::string str() const;
};

WittVector witt_zero(const Field& F, std::size_t length);

// phi_j = sum_{i<=j} p^i f_i^{p^{j-i}}
std::vector<InvPoly> phantom(const WittVector& w);
// Triangular inversion of phantom(); with require_integral a non-integral
// component throws std::domain_error.
WittVector witt_from_phantom(const Field& F, const std::vector<InvPoly>& phi, bool require_integral = true);

WittVector witt_add(const WittVector& a, const WittVector& b);
WittVector witt_neg(const WittVector& a);
WittVector witt_sub(const WittVector& a, const WittVector& b);
// w(qT): u^k picks up q^{-k}.
WittVector witt_substitute_q(const WittVector& w, const PAdic& q);

// sum_j pi_{s-j} phi_j / p^j as a series in u of order M; needs length <= s+1.
DiskSeries pi_exponent(const WittVector& w, int M);

struct PiExponential {
  WittVector source;
  DiskSeries series;  // in u, center 0
  // every coefficient beyond degree 0 has valuation >= v(pi_s)
  bool in_pi_s_ball = false;
};

// exp(sum_j pi_{s-j} phi_j / p^j) truncated at order M. Throws
// std::domain_error for non-integral w or a nonzero constant term.
PiExponential pi_exponential(const WittVector& w, int M);

// G1 = a_0 + delta_1(sum_j pi_{s-j} phi_j / p^j) on X, which needs a hole
// centered at 0. exp(pi_exponent(w)) is then a solution at infinity.
DifferentialEquation solvable_operator(const PAdic& a0, const WittVector& w, const DomainPtr& X, int M);
// Same operator in the chart u = T^{-1}: G1_u = -a_0 + delta_u(exponent), on a
// domain in the variable u.
DifferentialEquation solvable_operator_at_infinity(const PAdic& a0, const WittVector& w, const DomainPtr& U, int M);

struct DeformedRankOne {
  WittVector difference;  // w(qT) - w(T) in Witt arithmetic
  DiskSeries series;      // A(q, T) in u
  Ext min_valuation = Ext::inf();  // over coefficients of degree >= 1
  RadiusEstimate radius;           // about u = 0
  Rational tolerance{0};
  bool integral = false;
  bool overconvergent = false;  // radius estimate beyond |u| = 1 by more than the band
  std::vector<std::string> diagnostics;

  bool in_robba() const { return integral && overconvergent; }
  std::string str() const;
};

// A(q, T) = e(w(qT), 1) / e(w(T), 1) through the group law. w need not be
// integral; the integrality and Robba-membership diagnostics are reported,
// never thrown.
DeformedRankOne rank_one_deformed_matrix(const WittVector& w, const PAdic& q, int M);

}  // namespace qconf
