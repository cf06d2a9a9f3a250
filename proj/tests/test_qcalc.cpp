#include <random>

#include "doctest.h"
#include "qconf/qcalc.hpp"

using namespace qconf;

namespace {

const Field& Q3() { return make_field(3, -1, 40); }
PAdic I(long n) { return PAdic::from_int(Q3(), n); }

DiskSeries random_poly(const Field& F, const PAdic& c, int degree, int M, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> coef(-1000, 1000);
  DiskSeries f = DiskSeries::zero(F, c, Rational(0), M);
  for (int k = 0; k <= degree; ++k) f.coeffs()[static_cast<std::size_t>(k)] = PAdic::from_int(F, coef(rng));
  return f;
}

// Brute-force product expansion of prod_{k<n} (1 - q^k T), coefficient of T^i.
PAdic product_coefficient(long n, long i, const PAdic& q) {
  const Field& F = *q.field();
  std::vector<PAdic> c{PAdic::one(F)};
  for (long k = 0; k < n; ++k) {
    std::vector<PAdic> next(c.size() + 1, PAdic::zero(F));
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j] += c[j];
      next[j + 1] -= c[j] * q.pow(k);
    }
    c = next;
  }
  return c[static_cast<std::size_t>(i)];
}

}  // namespace

TEST_CASE("q-integers and q-factorials") {
  CHECK(q_integer(3, I(1)).equals(I(3)));
  CHECK(q_integer(2, I(4)).equals(I(5)));
  const Field& K0 = make_field(3, 0, 30);
  const PAdic z = zeta(K0);
  CHECK(q_integer(3, z).is_zero());
  for (long n = 3; n <= 6; ++n) CHECK(q_factorial(n, z).is_zero());
  CHECK_FALSE(q_factorial(2, z).is_zero());
  CHECK(q_factorial(4, I(1)).equals(I(24)));
}

TEST_CASE("q-binomials") {
  CHECK(q_binomial(4, 2, I(1)).equals(I(6)));
  CHECK(q_binomial(2, 1, I(4)).equals(I(5)));
  CHECK_THROWS(q_binomial(3, 4, I(4)));
  const Field& K0 = make_field(3, 0, 30);
  for (const PAdic& q : {zeta(K0), PAdic::from_int(K0, 4L), PAdic::from_int(K0, 7L)}) {
    for (long n = 1; n <= 6; ++n)
      for (long i = 1; i < n; ++i) {
        const PAdic rec = q_binomial(n - 1, i - 1, q) + q.pow(i) * q_binomial(n - 1, i, q);
        CHECK(q_binomial(n, i, q).equals(rec));
        const PAdic raw = product_coefficient(n, i, q);
        const PAdic expect = q_binomial(n, i, q) * q.pow(i * (i - 1) / 2);
        CHECK(((i % 2 == 0) ? raw : -raw).equals(expect));
      }
  }
}

TEST_CASE("twisted monomials") {
  const QContext ctx(I(4), I(1), 6);
  const DiskSeries m0 = twisted_monomial(0, ctx);
  CHECK(m0[0].equals(I(1)));
  const DiskSeries m1 = twisted_monomial(1, ctx);
  CHECK(m1[1].equals(I(1)));
  CHECK(m1[0].is_zero());
  const DiskSeries m2 = twisted_monomial(2, ctx);
  CHECK(m2[2].equals(I(1)));
  CHECK(m2[1].equals(I(-3)));
  CHECK(m2[0].is_zero());
  const QContext c0(I(4), I(0), 6);
  const DiskSeries t3 = twisted_monomial(3, c0);
  for (int k = 0; k <= 6; ++k) CHECK(t3[static_cast<std::size_t>(k)].equals(I(k == 3 ? 1 : 0)));
}

TEST_CASE("to_twisted and from_twisted") {
  const QContext ctx(I(4), I(1), 2);
  DiskSeries f = DiskSeries::zero(Q3(), I(1), Rational(0), 2);
  f.coeffs()[2] = I(1);
  const TwistedSeries t = to_twisted(f, ctx);
  CHECK(t.coeffs[0].is_zero());
  CHECK(t.coeffs[1].equals(I(3)));
  CHECK(t.coeffs[2].equals(I(1)));

  const QContext big(I(4), I(1), 20);
  const TwistedBasis basis(big);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const DiskSeries g = random_poly(Q3(), I(1), 20, 20, rng);
    CHECK((basis.from_twisted(basis.to_twisted(g)) - g).min_valuation() >= Ext(40));
  }
  const QContext zero_c(I(4), I(0), 8);
  const DiskSeries h = random_poly(Q3(), I(0), 8, 8, rng);
  const TwistedSeries th = to_twisted(h, zero_c);
  for (int k = 0; k <= 8; ++k) CHECK(th.coeffs[static_cast<std::size_t>(k)].equals(h[static_cast<std::size_t>(k)]));
}

TEST_CASE("twisted norm equals the Gauss norm and b_tilde bound") {
  const QContext ctx(I(4), I(1), 12);
  const TwistedBasis basis(ctx);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const DiskSeries g = random_poly(Q3(), I(1), 12, 12, rng);
    const TwistedSeries t = basis.to_twisted(g);
    for (Rational rho : {Rational(0), Rational(-1, 2), Rational(-1, 3)}) CHECK(twisted_gauss_norm(t, rho) == g.log_gauss_norm(rho));
    CHECK_THROWS_AS(twisted_gauss_norm(t, Rational(-1)), std::domain_error);
  }
  const Ext qc = (ctx.q - I(1)).log_abs() + ctx.c.log_abs();
  for (int n = 0; n <= 12; ++n)
    for (int i = 0; i < n; ++i) {
      const PAdic& b = basis.b_tilde(n, i);
      if (!b.is_zero()) CHECK(b.log_abs() <= qc * Rational(n - i));
    }
}

TEST_CASE("twisted Taylor coefficients") {
  const QContext ctx(I(4), I(1), 6);
  const DiskSeries k = DiskSeries::constant(Q3(), I(1), Rational(0), 6, I(7));
  const TwistedSeries tk = twisted_taylor_coeffs(k, ctx);
  CHECK(tk.coeffs[0].equals(I(7)));
  for (int n = 1; n <= 6; ++n) CHECK(tk.coeffs[static_cast<std::size_t>(n)].is_zero());
  const TwistedSeries t3 = twisted_taylor_coeffs(twisted_monomial(3, ctx), ctx);
  for (int n = 0; n <= 6; ++n) CHECK((t3.coeffs[static_cast<std::size_t>(n)] - I(n == 3 ? 1 : 0)).valuation_bound() >= Ext(36));
  // T^2 around 1
  DiskSeries sq = DiskSeries::zero(Q3(), I(1), Rational(0), 6);
  sq.coeffs()[0] = I(1);
  sq.coeffs()[1] = I(2);
  sq.coeffs()[2] = I(1);
  const TwistedSeries a = twisted_taylor_coeffs(sq, ctx);
  const TwistedSeries b = to_twisted(sq, ctx);
  for (int n = 0; n <= 6; ++n) CHECK((a.coeffs[static_cast<std::size_t>(n)] - b.coeffs[static_cast<std::size_t>(n)]).valuation_bound() >= Ext(36));
  const Field& K0 = make_field(3, 0, 30);
  CHECK_THROWS_AS(twisted_taylor_coeffs(DiskSeries::zero(K0, PAdic::zero(K0), Rational(0), 4), QContext(zeta(K0), PAdic::zero(K0), 4)),
                  std::domain_error);
}

TEST_CASE("q-Leibniz") {
  const QContext ctx(I(4), I(1), 12);
  std::mt19937_64 rng(8);
  for (int n = 0; n <= 5; ++n) {
    const DiskSeries f = random_poly(Q3(), I(1), 3, 12, rng);
    const DiskSeries g = random_poly(Q3(), I(1), 3, 12, rng);
    const VerificationReport r = q_leibniz_check(f, g, n, ctx, Ext(35));
    CHECK(r.passed);
  }
}

TEST_CASE("twisted order of a product") {
  const QContext ctx(I(4), I(1), 12);
  const TwistedBasis basis(ctx);
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const int a = trial % 4;
    const int b = (trial / 2) % 4;
    DiskSeries f = twisted_monomial(a, ctx) * random_poly(Q3(), I(1), 3, 12, rng);
    DiskSeries g = twisted_monomial(b, ctx) * random_poly(Q3(), I(1), 3, 12, rng);
    const int vf = basis.to_twisted(f).order();
    const int vg = basis.to_twisted(g).order();
    CHECK(basis.to_twisted(f * g).order() >= std::max(vf, vg));
  }
}
