#include "qconf/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace qconf {

Rational Ext::value() const {
  if (kind_ != Kind::finite) throw std::logic_error("Ext::value on infinite value");
  return value_;
}

Ext Ext::operator-() const {
  switch (kind_) {
    case Kind::pos_inf: return neg_inf();
    case Kind::neg_inf: return inf();
    default: return Ext(-value_);
  }
}

Ext operator+(const Ext& a, const Ext& b) {
  if (a.is_inf() || b.is_inf()) {
    if (a.is_neg_inf() || b.is_neg_inf()) throw std::logic_error("inf + -inf");
    return Ext::inf();
  }
  if (a.is_neg_inf() || b.is_neg_inf()) return Ext::neg_inf();
  return Ext(a.value_ + b.value_);
}

Ext operator*(const Ext& a, const Rational& k) {
  if (a.finite()) return Ext(a.value_ * k);
  if (k.numerator() == 0) throw std::logic_error("inf * 0");
  return (k.numerator() > 0) ? a : -a;
}

Ext operator/(const Ext& a, const Rational& k) {
  if (k.numerator() == 0) throw std::domain_error("Ext division by zero");
  return a * (Rational(1) / k);
}

bool operator==(const Ext& a, const Ext& b) {
  if (a.kind_ != b.kind_) return false;
  return !a.finite() || a.value_ == b.value_;
}

bool operator<(const Ext& a, const Ext& b) {
  if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
  return a.finite() && a.value_ < b.value_;
}

std::string rational_str(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string rational_decimal(const Rational& r, int digits) {
  std::int64_t num = r.numerator();
  const std::int64_t den = r.denominator();
  std::string out;
  if (num < 0) {
    out.push_back('-');
    num = -num;
  }
  out += std::to_string(num / den);
  std::int64_t rem = num % den;
  if (digits > 0) {
    out.push_back('.');
    for (int i = 0; i < digits; ++i) {
      // den fits comfortably below 2^62 in practice; rem*10 cannot overflow.
      rem *= 10;
      out.push_back(static_cast<char>('0' + rem / den));
      rem %= den;
    }
  }
  if (out == "-0" || out.rfind("-0.", 0) == 0) {
    bool all_zero = true;
    for (std::size_t i = 1; i < out.size(); ++i)
      if (out[i] != '0' && out[i] != '.') all_zero = false;
    if (all_zero) out.erase(0, 1);
  }
  return out;
}

std::string Ext::str() const {
  if (is_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  return rational_str(value_);
}

std::string Ext::decimal(int digits) const {
  if (!finite()) return str();
  return rational_decimal(value_, digits);
}

double Ext::approx() const {
  if (is_inf()) return HUGE_VAL;
  if (is_neg_inf()) return -HUGE_VAL;
  return static_cast<double>(value_.numerator()) / static_cast<double>(value_.denominator());
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const std::int64_t n = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Rational(n);
    }
    const std::string a = s.substr(0, slash);
    const std::string b = s.substr(slash + 1);
    const std::int64_t n = std::stoll(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    const std::int64_t d = std::stoll(b, &used);
    if (used != b.size() || d == 0) throw std::invalid_argument(s);
    return Rational(n, d);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
}

Ext parse_ext(const std::string& s) {
  if (s == "inf" || s == "+inf") return Ext::inf();
  if (s == "-inf") return Ext::neg_inf();
  return Ext(parse_rational(s));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_of(const Rational& r) { return floor_div(r.numerator(), r.denominator()); }

std::int64_t ceil_of(const Rational& r) { return -floor_div(-r.numerator(), r.denominator()); }

}  // namespace qconf
