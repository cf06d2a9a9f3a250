#include "doctest.h"
#include "qconf/series.hpp"

using namespace qconf;

namespace {

DiskSeries poly(const Field& F, std::vector<long> c, int M) {
  DiskSeries f = DiskSeries::zero(F, PAdic::zero(F), Rational(0), M);
  for (std::size_t i = 0; i < c.size(); ++i) f.coeffs()[i] = PAdic::from_int(F, c[i]);
  return f;
}

Ext diff_valuation(const DiskSeries& f, const DiskSeries& g) { return (f - g).min_valuation(); }

}  // namespace

TEST_CASE("gauss norm of 3 + T^2") {
  const Field& F = make_field(3, -1, 40);
  const DiskSeries f = poly(F, {3, 0, 1}, 4);
  CHECK(f.log_gauss_norm(Rational(0)) == Ext(0));
  CHECK(f.log_gauss_norm(Rational(-1)) == Ext(-1));
}

TEST_CASE("gauss norm is log-increasing and log-convex") {
  const Field& F = make_field(3, -1, 40);
  const DiskSeries f = poly(F, {9, 1, 27, 0, 1, 3}, 5);
  std::vector<Ext> vals;
  for (int k = -8; k <= 0; ++k) vals.push_back(f.log_gauss_norm(Rational(k, 2)));
  for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i - 1] <= vals[i]);
  for (std::size_t i = 1; i + 1 < vals.size(); ++i) CHECK(vals[i] - vals[i - 1] <= vals[i + 1] - vals[i]);
}

TEST_CASE("radius estimates") {
  const Field& K0 = make_field(3, 0, 50);
  const int M = 60;
  DiskSeries g = DiskSeries::variable(K0, PAdic::zero(K0), Rational(0), M).scaled(pi_m(K0, 0));
  const RadiusEstimate e = estimate_radius(exp_series(g));
  // v(a_n) = s_3(n)/2, minimised over the window at n = 54 = 2000_3
  CHECK(e.log_radius == Ext(Rational(1, 54)));
  CHECK(e.log_radius >= Ext(0));
  CHECK(e.log_radius <= Ext(estimator_tolerance(M, 3)));
  const Field& Q3 = make_field(3, -1, 50);
  const RadiusEstimate geo = estimate_radius(poly(Q3, std::vector<long>(21, 1), 20));
  CHECK(geo.log_radius == Ext(0));
  DiskSeries pn = DiskSeries::zero(Q3, PAdic::zero(Q3), Rational(0), 20);
  for (int n = 0; n <= 20; ++n) pn.coeffs()[static_cast<std::size_t>(n)] = PAdic::from_int(Q3, 3L).pow(n);
  CHECK(estimate_radius(pn).log_radius == Ext(1));
  const RadiusEstimate z = estimate_radius(poly(Q3, {1, 1}, 20));
  CHECK(z.inconclusive);
}

TEST_CASE("exp and log1p") {
  const Field& Q3 = make_field(3, -1, 40);
  const DiskSeries zero = DiskSeries::zero(Q3, PAdic::zero(Q3), Rational(0), 10);
  CHECK(diff_valuation(exp_series(zero), DiskSeries::constant(Q3, PAdic::zero(Q3), Rational(0), 10, PAdic::one(Q3))) >= Ext(40));
  const DiskSeries g = poly(Q3, {0, 3}, 40);
  const DiskSeries back = exp_series(log1p_series(g)) - DiskSeries::constant(Q3, PAdic::zero(Q3), Rational(0), 40, PAdic::one(Q3));
  CHECK(diff_valuation(back, g) >= Ext(30));

  const Field& K0 = make_field(3, 0, 40);
  const PAdic q = PAdic::from_int(K0, 4L);
  const PAdic k = pi_m(K0, 0) * (q - PAdic::one(K0));
  const DiskSeries e = exp_series(DiskSeries::variable(K0, PAdic::zero(K0), Rational(0), 20).scaled(k));
  PAdic term = PAdic::one(K0);
  for (int n = 0; n <= 20; ++n) {
    CHECK((e[static_cast<std::size_t>(n)] - term).valuation_bound() >= Ext(30));
    term = term * k / PAdic::from_int(K0, static_cast<long>(n + 1));
  }
  CHECK_THROWS(exp_series_certified(DiskSeries::constant(Q3, PAdic::zero(Q3), Rational(0), 4, PAdic::one(Q3))));
}

TEST_CASE("sigma, recentering and composition") {
  const Field& Q3 = make_field(3, -1, 40);
  const PAdic c = PAdic::from_int(Q3, 1L);
  DiskSeries f = DiskSeries::zero(Q3, c, Rational(0), 6);
  for (int n = 0; n <= 6; ++n) f.coeffs()[static_cast<std::size_t>(n)] = PAdic::from_int(Q3, static_cast<long>(n * n + 1));
  const PAdic q = PAdic::from_int(Q3, 4L);
  const DiskSeries s = f.sigma(q);
  for (long x : {2L, 5L, 7L, 13L}) {
    const PAdic X = PAdic::from_int(Q3, x);
    CHECK((s.evaluate(X) - f.evaluate(q * X)).valuation_bound() >= Ext(35));
  }
  const DiskSeries r = f.recentered(PAdic::from_int(Q3, 4L));
  CHECK((r.evaluate(PAdic::from_int(Q3, 10L)) - f.evaluate(PAdic::from_int(Q3, 10L))).valuation_bound() >= Ext(35));
  const DiskSeries sq = f.sigma(q).sigma(PAdic::from_int(Q3, 7L));
  CHECK(diff_valuation(sq, f.sigma(PAdic::from_int(Q3, 28L))) >= Ext(35));
  // truncation commutes with sigma only at center 0
  DiskSeries f0 = DiskSeries(Q3, PAdic::zero(Q3), Rational(0), f.coeffs());
  CHECK(diff_valuation((f0 * f0).sigma(q), f0.sigma(q) * f0.sigma(q)) >= Ext(35));
  const DiskSeries inv = f.inverse();
  CHECK(diff_valuation(f * inv, DiskSeries::constant(Q3, c, Rational(0), 6, PAdic::one(Q3))) >= Ext(35));
}

TEST_CASE("delta1 on monomials") {
  const Field& Q3 = make_field(3, -1, 40);
  for (int k = 0; k <= 5; ++k) {
    std::vector<long> c(static_cast<std::size_t>(k) + 1, 0);
    c.back() = 1;
    const DiskSeries f = poly(Q3, c, 8);
    std::vector<long> d(c);
    d.back() = k;
    CHECK(diff_valuation(f.delta1(), poly(Q3, d, 7)) >= Ext(40));
  }
}

TEST_CASE("estimator tolerance") {
  CHECK(estimator_tolerance(64, 3) == Rational(2 * 5, 64));
  CHECK(estimator_tolerance(27, 3) == Rational(2 * 4, 27));
}
