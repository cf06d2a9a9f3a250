#include <random>

#include "doctest.h"
#include "qconf/analytic.hpp"

using namespace qconf;

namespace {

const Field& Q3() { return make_field(3, -1, 40); }
PAdic I(long n) { return PAdic::from_int(Q3(), n); }

DomainPtr disk01() { return std::make_shared<const Affinoid>(Affinoid::disk(Q3(), I(0), Rational(0))); }
DomainPtr holed(long c, long logr) {
  return std::make_shared<const Affinoid>(Affinoid(Q3(), {I(0), Rational(0)}, {{I(c), Rational(logr)}}));
}

AnalyticFunction T_poly(const DomainPtr& X, int M, std::vector<long> c) {
  std::vector<PAdic> a;
  for (long x : c) a.push_back(I(x));
  return AnalyticFunction::from_T_poly(X, M, a);
}

AnalyticFunction random_function(const DomainPtr& X, int M, std::mt19937_64& rng, int degree) {
  std::uniform_int_distribution<long> coef(-40, 40);
  AnalyticFunction f(X, M);
  for (int k = 0; k <= degree; ++k) f.poly()[static_cast<std::size_t>(k)] = I(coef(rng));
  for (auto& h : f.holes())
    for (int k = 0; k < degree; ++k) h[static_cast<std::size_t>(k)] = I(coef(rng)) * I(3).pow(k);
  return f;
}

}  // namespace

TEST_CASE("gauss norm examples") {
  const auto X = disk01();
  const AnalyticFunction f = T_poly(X, 8, {3, 0, 1});
  CHECK(f.gauss_norm(I(0), Rational(0)).log_norm == Ext(0));
  CHECK(f.gauss_norm(I(0), Rational(-1)).log_norm == Ext(-1));
  const auto Y = holed(1, -1);
  const AnalyticFunction g = AnalyticFunction::hole_term(Y, 8, 0, 1, I(1));
  CHECK(g.gauss_norm(I(1), Rational(-1)).log_norm == Ext(1));
  CHECK_FALSE(g.gauss_norm(I(1), Rational(-1)).truncation_limited);
  CHECK(g.sup_norm().log_norm == Ext(1));
  CHECK(AnalyticFunction::constant(Y, 8, I(1)).sup_norm().log_norm == Ext(0));
  CHECK(AnalyticFunction::coordinate(X, 8).sup_norm().log_norm == Ext(0));
  CHECK_THROWS_AS(g.gauss_norm(I(1), Rational(-2)), DomainError);
}

TEST_CASE("gauss norm with two holes by the rational route") {
  const auto X = std::make_shared<const Affinoid>(Affinoid(Q3(), {I(0), Rational(0)}, {{I(1), Rational(-1)}, {I(-1), Rational(-1)}}));
  const AnalyticFunction f = AnalyticFunction::hole_term(X, 6, 0, 1, I(1)) + AnalyticFunction::hole_term(X, 6, 1, 1, I(1));
  // 2T / (T^2 - 1)
  CHECK(f.gauss_norm(I(0), Rational(0)).log_norm == Ext(0));
  CHECK(f.gauss_norm(I(1), Rational(-1)).log_norm == Ext(1));
  // 1/(T-1) - 1/(T-4) = -3 / ((T-1)(T-4)) near the hole at 1 with radius 1/9
  const auto Y = std::make_shared<const Affinoid>(Affinoid(Q3(), {I(0), Rational(0)}, {{I(1), Rational(-2)}, {I(4), Rational(-2)}}));
  const AnalyticFunction g = AnalyticFunction::hole_term(Y, 6, 0, 1, I(1)) - AnalyticFunction::hole_term(Y, 6, 1, 1, I(1));
  CHECK(g.gauss_norm(I(1), Rational(-1)).log_norm == Ext(1));
  CHECK(g.gauss_norm(I(0), Rational(0)).log_norm == Ext(-1));
}

TEST_CASE("sigma examples") {
  const auto X = disk01();
  const AnalyticFunction t = AnalyticFunction::coordinate(X, 6);
  CHECK((t.sigma(I(4)) - t.scaled(I(4))).difference_valuation() >= Ext(40));
  const auto A = std::make_shared<const Affinoid>(Affinoid(Q3(), {I(0), Rational(0)}, {{I(0), Rational(-1)}}));
  const AnalyticFunction inv = AnalyticFunction::hole_term(A, 6, 0, 1, I(1));
  const PAdic q = I(10);
  CHECK((inv.sigma(q) - inv.scaled(q.inverse())).difference_valuation() >= Ext(38));
  CHECK(inv.sigma(q).tail().is_neg_inf());

  const auto Y = holed(1, -2);
  const int M = 20;
  const AnalyticFunction f = AnalyticFunction::hole_term(Y, M, 0, 1, I(1));
  const PAdic q2 = I(28);
  const AnalyticFunction s = f.sigma(q2);
  CHECK((s.holes()[0][0] - q2.inverse()).valuation_bound() >= Ext(40));
  for (long x : {0L, 2L, 3L, 5L, 10L}) {
    const PAdic X0 = I(x);
    const Ext err = (s.evaluate(X0) - f.evaluate(q2 * X0)).valuation_bound();
    CHECK(err >= -s.tail());
  }
  // |delta| / R_1 = 1/3 per dropped order
  CHECK(s.tail() == Ext(-18));
  CHECK_THROWS_AS(AnalyticFunction::hole_term(holed(1, -1), 4, 0, 1, I(1)).sigma(I(4)), DomainError);
}

TEST_CASE("derivations") {
  const auto X = disk01();
  for (int k = 0; k <= 5; ++k) {
    std::vector<long> c(static_cast<std::size_t>(k) + 1, 0);
    c.back() = 1;
    const AnalyticFunction f = T_poly(X, 8, c);
    c.back() = k;
    CHECK((f.delta1() - T_poly(X, 8, c)).difference_valuation() >= Ext(40));
  }
  const PAdic q = I(4);
  const AnalyticFunction t2 = T_poly(X, 8, {0, 0, 1});
  CHECK((t2.D_q(q) - T_poly(X, 8, {0, 8})).difference_valuation() >= Ext(40));
  // (T-1)_{q,2} = (T-1)(T-q) and d_q of it is [2]_q (T-1)
  const AnalyticFunction tw = T_poly(X, 8, {4, -5, 1});
  CHECK((tw.d_q(q) - T_poly(X, 8, {-5, 5})).difference_valuation() >= Ext(38));
  CHECK_THROWS(tw.d_q(I(1)));
}

TEST_CASE("products agree with pointwise products") {
  const auto X = std::make_shared<const Affinoid>(Affinoid(Q3(), {I(0), Rational(0)}, {{I(1), Rational(-1)}, {I(2), Rational(-2)}}));
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const AnalyticFunction f = random_function(X, 12, rng, 5);
    const AnalyticFunction g = random_function(X, 12, rng, 5);
    const AnalyticFunction h = f * g;
    for (long x : {0L, 3L, 6L, 13L}) {
      const PAdic pt = I(x);
      CHECK((h.evaluate(pt) - f.evaluate(pt) * g.evaluate(pt)).valuation_bound() >= min(Ext(30), -h.tail()));
    }
    // the gauss norm is multiplicative
    CHECK(h.gauss_norm(I(0), Rational(0)).log_norm == f.gauss_norm(I(0), Rational(0)).log_norm + g.gauss_norm(I(0), Rational(0)).log_norm);
  }
}

TEST_CASE("division by a linear factor") {
  const auto X = holed(1, -1);
  std::mt19937_64 rng(11);
  const AnalyticFunction f = random_function(X, 10, rng, 4);
  for (long a : {0L, 3L, 5L}) {
    const auto [g, r] = f.div_linear(I(a));
    CHECK((r - f.evaluate(I(a))).valuation_bound() >= Ext(35));
    const AnalyticFunction back = g * T_poly(X, 10, {-a, 1});
    CHECK((back.plus_constant(r) - f).difference_valuation() >= Ext(35));
  }
  // a in the hole: multiply by the expansion of 1/(T - a)
  const auto [g, r] = f.div_linear(I(10));
  CHECK(r.is_zero());
  for (long x : {0L, 2L, 3L}) {
    const PAdic pt = I(x);
    CHECK((g.evaluate(pt) * (pt - I(10)) - f.evaluate(pt)).valuation_bound() >= min(Ext(30), -g.tail()));
  }
}

TEST_CASE("inverse by Newton iteration") {
  const auto X = holed(1, -1);
  AnalyticFunction f = AnalyticFunction::constant(X, 16, I(2)) + AnalyticFunction::hole_term(X, 16, 0, 1, I(1)).scaled(I(9));
  f.poly()[1] = I(3);
  const AnalyticFunction g = f.inverse();
  const AnalyticFunction e = (f * g).plus_constant(-PAdic::one(Q3()));
  CHECK(e.difference_valuation() >= min(Ext(30), -e.tail()));
  CHECK_THROWS(AnalyticFunction::coordinate(X, 4).inverse());
}

TEST_CASE("taylor expansion at a point") {
  const auto X = holed(1, -1);
  std::mt19937_64 rng(5);
  const AnalyticFunction f = random_function(X, 10, rng, 4);
  const DiskSeries s = f.taylor_at(I(0), 40);
  CHECK(s.log_radius() == Rational(0));
  for (long x : {3L, 9L, -6L}) CHECK((s.evaluate(I(x)) - f.evaluate(I(x))).valuation_bound() >= Ext(30));
}

TEST_CASE("derivative bound on the sup norm") {
  const auto X = holed(1, -1);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const AnalyticFunction f = random_function(X, 12, rng, 6);
    CHECK(f.derivative().sup_norm().log_norm <= f.sup_norm().log_norm - Ext(X->r_X()));
  }
}

TEST_CASE("d_q bound with k0 = 1") {
  const auto X = holed(1, -2);
  const PAdic q = I(28);
  REQUIRE(affinoid_q_invariant(*X, q).k0 == 1);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const AnalyticFunction f = random_function(X, 12, rng, 6);
    const AnalyticFunction d = f.d_q(q);
    CHECK(d.sup_norm().log_norm <= f.sup_norm().log_norm - Ext(X->r_X()));
  }
}

TEST_CASE("sigma is multiplicative and composes") {
  const auto X = disk01();
  std::mt19937_64 rng(1);
  const AnalyticFunction f = random_function(X, 10, rng, 4);
  const AnalyticFunction g = random_function(X, 10, rng, 4);
  const PAdic q = I(4);
  CHECK(((f * g).sigma(q) - f.sigma(q) * g.sigma(q)).difference_valuation() >= Ext(38));
  CHECK((f.sigma(q).sigma(I(7)) - f.sigma(I(28))).difference_valuation() >= Ext(38));
}

TEST_CASE("twisted Leibniz rule on polynomials") {
  const auto X = disk01();
  std::mt19937_64 rng(2);
  const PAdic q = I(4);
  for (int trial = 0; trial < 5; ++trial) {
    const AnalyticFunction f = random_function(X, 10, rng, 3);
    const AnalyticFunction g = random_function(X, 10, rng, 3);
    const AnalyticFunction lhs = (f * g).d_q(q);
    const AnalyticFunction rhs = f.sigma(q) * g.d_q(q) + f.d_q(q) * g;
    CHECK((lhs - rhs).difference_valuation() >= Ext(37));
  }
}
