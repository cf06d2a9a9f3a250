#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace qconf {

using Rational = boost::rational<std::int64_t>;

// Element of Q extended by -inf and +inf. Used for valuations (+inf for zero)
// and for log_p of radii and norms.
class Ext {
 public:
  enum class Kind : std::int8_t { neg_inf, finite, pos_inf };

  Ext() = default;
  Ext(Rational r) : value_(r) {}  // NOLINT(google-explicit-constructor)
  Ext(std::int64_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Ext(std::int64_t num, std::int64_t den) : value_(num, den) {}

  static Ext inf() { return Ext(Kind::pos_inf); }
  static Ext neg_inf() { return Ext(Kind::neg_inf); }

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Kind::finite; }
  bool is_inf() const { return kind_ == Kind::pos_inf; }
  bool is_neg_inf() const { return kind_ == Kind::neg_inf; }
  // Throws std::logic_error when infinite.
  Rational value() const;

  Ext operator-() const;
  friend Ext operator+(const Ext& a, const Ext& b);
  friend Ext operator-(const Ext& a, const Ext& b) { return a + (-b); }
  friend Ext operator*(const Ext& a, const Rational& k);
  friend Ext operator/(const Ext& a, const Rational& k);

  friend bool operator==(const Ext& a, const Ext& b);
  friend bool operator<(const Ext& a, const Ext& b);
  friend bool operator!=(const Ext& a, const Ext& b) { return !(a == b); }
  friend bool operator>(const Ext& a, const Ext& b) { return b < a; }
  friend bool operator<=(const Ext& a, const Ext& b) { return !(b < a); }
  friend bool operator>=(const Ext& a, const Ext& b) { return !(a < b); }

  // "3/2", "inf", "-inf"
  std::string str() const;
  // Decimal rendering with a fixed number of fractional digits, computed
  // exactly from the rational (no binary floating point).
  std::string decimal(int digits = 12) const;
  // Approximate double, for diagnostics only.
  double approx() const;

 private:
  explicit Ext(Kind k) : kind_(k) {}
  Kind kind_ = Kind::finite;
  Rational value_{0};
};

inline Ext min(const Ext& a, const Ext& b) { return b < a ? b : a; }
inline Ext max(const Ext& a, const Ext& b) { return a < b ? b : a; }

std::string rational_str(const Rational& r);
std::string rational_decimal(const Rational& r, int digits = 12);
// Parses "a", "a/b", "inf", "-inf"; throws std::invalid_argument.
Ext parse_ext(const std::string& s);
Rational parse_rational(const std::string& s);
std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t ceil_of(const Rational& r);
std::int64_t floor_of(const Rational& r);

}  // namespace qconf
