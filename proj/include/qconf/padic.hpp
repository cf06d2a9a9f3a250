#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qconf/rational.hpp"

namespace qconf {

using Digits = std::vector<mpz_class>;

// Raised when an operation needs more digits than are known.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Q_p (s = -1) or K_s = Q_p(zeta_{p^{s+1}}) (s >= 0), with elements carried to
// N significant p-adic digits. K_s is totally ramified of degree e = p^s(p-1);
// elements are written in the basis 1, pi, ..., pi^{e-1} with pi = zeta - 1.
// For Q_p the uniformizer is p itself and e = 1.
class Field {
 public:
  static constexpr int kMaxDegree = 48;

  int p() const { return p_; }
  int level() const { return s_; }
  int precision() const { return N_; }
  // Ramification index (equal to the degree).
  int e() const { return e_; }
  // Largest meaningful relative precision, in pi-digits.
  std::int64_t cap() const { return static_cast<std::int64_t>(e_) * N_; }
  const mpz_class& modulus() const { return pow_p_[N_]; }
  const mpz_class& pow_p(int k) const { return pow_p_.at(k); }
  // Minimal polynomial of pi: pi^e = -sum_{i<e} c_i pi^i.
  const Digits& min_poly() const { return c_; }

  std::string str() const;
  bool same_as(const Field& o) const { return this == &o; }

  // Digit-vector arithmetic modulo p^N (in the pi basis).
  Digits mul(const Digits& a, const Digits& b) const;
  Digits scale(const Digits& a, const mpz_class& k) const;
  Digits add(const Digits& a, const Digits& b) const;
  Digits neg(const Digits& a) const;
  Digits mul_pi_pow(const Digits& a, std::int64_t k) const;
  // Exact division by pi^w of a vector known to have pi-valuation >= w.
  Digits div_pi_pow(const Digits& a, std::int64_t w) const;
  // pi-adic valuation of a digit vector, or -1 when it vanishes mod p^N.
  std::int64_t vec_valuation(const Digits& a) const;
  Digits unit_inverse(const Digits& u) const;
  // (p / pi^e)^m
  Digits eps_power(std::int64_t m) const;
  // Reduces to the canonical residue modulo pi^rel.
  void canonicalize(Digits& u, std::int64_t rel) const;
  Digits one() const;

  Field(int p, int s, int N);

 private:
  void reduce(Digits& a) const;
  Digits shift_once(const Digits& a) const;

  int p_;
  int s_;
  int N_;
  int e_;
  std::vector<mpz_class> pow_p_;  // p^0 .. p^(N+1)
  Digits c_;                      // minimal polynomial coefficients mod p^N
  std::vector<Digits> eta_pow_;   // (pi^e / p)^m, m = 0..N
  std::vector<Digits> eps_pow_;   // (p / pi^e)^m, m = 0..N
};

// Interned descriptors: the returned reference lives for the whole program.
const Field& make_field(int p, int s, int N);
bool is_prime(long n);

class PAdic {
 public:
  // Exact zero, not attached to any field.
  PAdic() = default;

  static PAdic zero(const Field& F);
  static PAdic inexact_zero(const Field& F, std::int64_t abs_pi);
  static PAdic from_int(const Field& F, const mpz_class& n);
  static PAdic from_int(const Field& F, long n) { return from_int(F, mpz_class(n)); }
  static PAdic from_rational(const Field& F, const mpz_class& num, const mpz_class& den);
  static PAdic from_rational(const Field& F, const Rational& r);
  static PAdic one(const Field& F) { return from_int(F, 1L); }
  // The uniformizer (p for Q_p, zeta - 1 for K_s).
  static PAdic uniformizer(const Field& F);
  // sum_i a_i pi^i with rational a_i.
  static PAdic from_pi_poly(const Field& F, const std::vector<Rational>& coeffs);
  // pi^v * unit with the given relative precision.
  static PAdic from_parts(const Field& F, std::int64_t pi_val, Digits unit, std::int64_t rel);

  const Field* field() const { return F_; }
  bool is_zero() const { return rel_ == 0; }
  bool is_exact_zero() const { return rel_ == 0 && exact_; }
  // v_p, +inf for zero (exact or not).
  Ext valuation() const;
  // As valuation(), but throws PrecisionError for an inexact zero.
  Ext valuation_exact() const;
  // Known lower bound for v_p: the valuation, or the precision level of an
  // inexact zero.
  Ext valuation_bound() const;
  Ext absolute_precision() const;
  // log_p |x| = -valuation.
  Ext log_abs() const { return -valuation(); }
  std::int64_t pi_valuation() const;
  std::int64_t relative_precision() const { return rel_; }
  std::int64_t absolute_pi_precision() const;
  const Digits& unit() const { return u_; }

  PAdic operator-() const;
  friend PAdic operator+(const PAdic& a, const PAdic& b);
  friend PAdic operator-(const PAdic& a, const PAdic& b);
  friend PAdic operator*(const PAdic& a, const PAdic& b);
  friend PAdic operator/(const PAdic& a, const PAdic& b);
  PAdic& operator+=(const PAdic& b) { return *this = *this + b; }
  PAdic& operator-=(const PAdic& b) { return *this = *this - b; }
  PAdic& operator*=(const PAdic& b) { return *this = *this * b; }
  PAdic& operator/=(const PAdic& b) { return *this = *this / b; }
  PAdic inverse() const;
  PAdic pow(std::int64_t n) const;
  PAdic mul_int(long k) const;
  PAdic div_int(long k) const;

  // Agreement at the joint precision.
  bool equals(const PAdic& o) const { return (*this - o).is_zero(); }
  // Structural equality (same digits, valuation and precision).
  bool identical(const PAdic& o) const;

  // Re-express in another precision of the same tower level.
  PAdic to_field(const Field& G) const;
  // As to_field, but with full precision in G: each pi-basis digit is
  // replaced by the smallest-height rational congruent to it, so values built
  // from small rationals lift exactly.
  PAdic padded_to(const Field& G) const;

  std::string str() const;

 private:
  static const Field* join(const PAdic& a, const PAdic& b);

  const Field* F_ = nullptr;
  std::int64_t v_ = 0;    // pi-valuation; for an inexact zero its pi-precision
  std::int64_t rel_ = 0;  // relative pi-precision, 0 for zero
  bool exact_ = true;     // meaningful only for zeros
  Digits u_;
};

// |p|^{1/(p-1)} as log_p.
Rational log_omega(int p);
// pi_m = zeta^{p^{s-m}} - 1 for 0 <= m <= s.
PAdic pi_m(const Field& F, int m);
PAdic zeta(const Field& F);

struct QMembership {
  enum class Kind { not_unit_norm, in_unit_disk, root_of_unity, generic };
  Kind kind = Kind::generic;
  Ext log_abs_q;
  Ext log_abs_q_minus_1;
  std::int64_t order = 0;      // for root_of_unity
  bool best_effort = true;     // root-of-unity detection is only at precision
  std::string str() const;
};

// Default bound on k in the search q^{a p^k} = 1.
inline constexpr int kRootOfUnityBound = 8;

QMembership q_membership(const PAdic& q, int max_k = kRootOfUnityBound);
bool is_root_of_unity(const PAdic& q, int max_k = kRootOfUnityBound);

}  // namespace qconf
