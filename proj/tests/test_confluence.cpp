#include "doctest.h"
#include "qconf/confluence.hpp"

using namespace qconf;

namespace {

const Field& Q3() { return make_field(3, -1, 40); }
const Field& K0() { return make_field(3, 0, 40); }
PAdic I(long n, const Field& F = Q3()) { return PAdic::from_int(F, n); }

DomainPtr disk(const Field& F, const Rational& log_r = Rational(0)) {
  return std::make_shared<const Affinoid>(Affinoid::disk(F, PAdic::zero(F), log_r));
}
DomainPtr annulus(const Field& F, const Rational& log_r) {
  return std::make_shared<const Affinoid>(Affinoid(F, {PAdic::zero(F), Rational(0)}, {{PAdic::zero(F), log_r}}));
}

FunctionMatrix scalar(const AnalyticFunction& f) { return FunctionMatrix(1, 1, f); }
FunctionMatrix scalar_const(const DomainPtr& X, int M, const PAdic& a) { return scalar(AnalyticFunction::constant(X, M, a)); }

bool close(const FunctionMatrix& a, const FunctionMatrix& b, long digits) {
  return difference_valuation(a - b) >= Ext(digits);
}

DifferentialEquation dwork(const DomainPtr& D, int M) {
  const Field& F = D->field();
  return {D, scalar(AnalyticFunction::from_T_poly(D, M, {PAdic::zero(F), pi_m(F, 0)}))};
}

AnalyticFunction exp_function(const DomainPtr& X, int M, const PAdic& lambda) {
  const Field& F = X->field();
  std::vector<PAdic> a;
  PAdic term = PAdic::one(F);
  for (int n = 0; n <= M; ++n) {
    a.push_back(term);
    term = term * lambda * PAdic::from_int(F, n + 1).inverse();
  }
  return AnalyticFunction::from_poly(X, M, a);
}

PAdic log_series(const PAdic& q, int terms) {
  const Field& F = *q.field();
  const PAdic x = q - PAdic::one(F);
  PAdic s = PAdic::zero(F);
  PAdic xn = PAdic::one(F);
  for (int n = 1; n <= terms; ++n) {
    xn = xn * x;
    const PAdic t = xn * PAdic::from_int(F, n).inverse();
    s = (n % 2) ? s + t : s - t;
  }
  return s;
}

FunctionMatrix unipotent_G1(const DomainPtr& X, int M) {
  FunctionMatrix G = zero_matrix(X, M, 2, 2);
  G(0, 1) = AnalyticFunction::constant(X, M, PAdic::one(X->field()));
  return G;
}

FunctionMatrix unipotent_A(const DomainPtr& X, int M, const PAdic& q) {
  FunctionMatrix A = identity_matrix(X, M, 2);
  A(0, 1) = AnalyticFunction::constant(X, M, log_series(q, 80));
  return A;
}

}  // namespace

TEST_CASE("admissibility examples") {
  const int M = 48;
  const auto X = disk(Q3());
  const PAdic q = I(4);
  // |q-1| s_X < r is strict, so r is taken just above |q-1|.
  const auto unit = check_admissible(unit_differential_equation(X, M), Rational(-1, 2), q, M);
  CHECK(unit.admissible());

  const auto D = disk(K0());
  const auto dw = check_admissible(dwork(D, M), Rational(-1, 2), I(4, K0()), M);
  CHECK(dw.admissible());
  CHECK(dw.log_R <= Ext(0));
  CHECK(dw.log_R >= Ext(-estimator_tolerance(M, 3)));

  // sigma_q - a with |a| > 1: radius |a|^{-1} omega |q-1| rho at the outer Shilov point
  const auto Y = annulus(Q3(), Rational(-1));
  const QDifferenceEquation k0{Y, q, scalar_const(Y, M, PAdic::from_rational(Q3(), Rational(1, 3)))};
  const auto rep = check_admissible(k0, Rational(-1, 2), M);
  CHECK_FALSE(rep.admissible());
  const auto r = generic_radius(k0, I(0), Rational(0), M);
  CHECK(r.log_radius <= Ext(-5, 2) + Ext(estimator_tolerance(M, 3)));
  CHECK(r.log_radius >= Ext(-5, 2) - Ext(estimator_tolerance(M, 3)));
}

TEST_CASE("deform examples") {
  const int M = 48;
  const auto Y = annulus(Q3(), Rational(-1, 2));
  for (long qp : {4L, 10L, 28L}) {
    const PAdic q = I(qp);
    const auto d = deform(DifferentialEquation{Y, identity_matrix(Y, M, 1)}, q, {M, false});
    CHECK(d.certified);
    CHECK(close(d.E.A, scalar_const(Y, M, q), 35));

    const auto u = deform(DifferentialEquation{Y, unipotent_G1(Y, M)}, q, {M, false});
    CHECK(close(u.E.A, unipotent_A(Y, M, q), 35));
  }

  const auto D = disk(K0());
  const PAdic pi0 = pi_m(K0(), 0);
  for (long qp : {4L, 10L, 28L}) {
    const PAdic q = I(qp, K0());
    const auto d = deform(dwork(D, M), q, {M, false});
    CHECK(close(d.E.A, scalar(exp_function(D, M, pi0 * (q - I(1, K0())))), 32));
  }

  // |q'-1| = 1 is outside every admissible disk
  CHECK_THROWS_AS(deform(dwork(D, M), I(2, K0()), {M, false}), std::domain_error);
  const auto forced = deform(dwork(D, 16), I(2, K0()), {16, true});
  CHECK_FALSE(forced.certified);
}

TEST_CASE("deform_between examples") {
  const int M = 32;
  const auto Y = annulus(Q3(), Rational(-1, 2));
  const PAdic q = I(4);
  const QDifferenceEquation Eq{Y, q, scalar_const(Y, M, q)};
  for (long qp : {10L, 28L, 4L}) CHECK(close(deform_between(Eq, I(qp), {M, false}).E.A, scalar_const(Y, M, I(qp)), 34));

  const auto X = disk(Q3());
  const QDifferenceEquation qexp{X, q, scalar(AnalyticFunction::from_T_poly(X, M, {I(1), q - I(1)}))};
  CHECK(close(deform_between(qexp, q, {M, false}).E.A, qexp.A, 36));
  // the two paths through the differential equation agree
  const auto c = confluence(qexp, {M, ConfluenceMode::derivative_of_family, 6});
  const PAdic q2 = I(10);
  CHECK(close(deform_between(qexp, q2, {M, false}).E.A, deform(c.E, q2, {M, false}).E.A, 25));
}

TEST_CASE("confluence examples in both modes") {
  const int M = 40;
  const auto Y = annulus(Q3(), Rational(-1, 2));
  const PAdic q = I(4);
  for (long a0 : {1L, 2L, -3L}) {
    const QDifferenceEquation E{Y, q, scalar_const(Y, M, q.pow(a0))};
    const auto d = confluence(E, {M, ConfluenceMode::derivative_of_family, 6});
    CHECK(close(d.E.G1, scalar_const(Y, M, I(a0)), 30));
    const auto it = confluence(E, {M, ConfluenceMode::iterated_limit, 6});
    CHECK(it.converged);
    CHECK(close(it.E.G1, d.E.G1, 5));
  }

  const auto D = disk(K0());
  const PAdic qk = I(4, K0());
  const QDifferenceEquation dw{D, qk, scalar(exp_function(D, M, pi_m(K0(), 0) * (qk - I(1, K0()))))};
  const auto d = confluence(dw, {M, ConfluenceMode::derivative_of_family, 6});
  CHECK(close(d.E.G1, dwork(D, M).G1, 28));
  const auto it = confluence(dw, {M, ConfluenceMode::iterated_limit, 6});
  REQUIRE(it.growth.size() == 6);
  for (std::size_t k = 1; k < it.growth.size(); ++k) CHECK(it.growth[k] > it.growth[k - 1]);
  CHECK(close(it.E.G1, d.E.G1, 5));

  const QDifferenceEquation U{Y, q, unipotent_A(Y, M, q)};
  CHECK(close(confluence(U, {M, ConfluenceMode::derivative_of_family, 6}).E.G1, unipotent_G1(Y, M), 30));
}

TEST_CASE("roundtrips") {
  const int M = 48;
  const auto X = disk(Q3());
  const auto unit = roundtrip_check(unit_differential_equation(X, M), I(4), M, Ext(38));
  CHECK(unit.passed);

  const auto D = disk(K0());
  const auto dw = roundtrip_check(dwork(D, M), I(4, K0()), M, Ext(28));
  CHECK(dw.passed);

  const auto Y = annulus(Q3(), Rational(-1, 2));
  CHECK(roundtrip_check(DifferentialEquation{Y, unipotent_G1(Y, M)}, I(4), M, Ext(28)).passed);
  CHECK(roundtrip_check(QDifferenceEquation{Y, I(4), unipotent_A(Y, M, I(4))}, M, Ext(28)).passed);
}

TEST_CASE("family coherence and group law") {
  const int M = 40;
  const auto D = disk(K0());
  const auto E = dwork(D, M);
  const PAdic q1 = I(4, K0());
  const PAdic q2 = I(10, K0());
  const auto A1 = deform(E, q1, {M, false}).E;
  const auto A2 = deform(E, q2, {M, false}).E;
  CHECK(close(deform_between(A1, q2, {M, false}).E.A, A2.A, 25));
  const auto A12 = deform(E, q1 * q2, {M, false}).E;
  CHECK(close(A12.A, sigma(A2.A, q1) * A1.A, 28));
}

TEST_CASE("frobenius pullback") {
  const int M = 24;
  const auto Y = annulus(Q3(), Rational(-1));
  const DifferentialEquation E{Y, scalar_const(Y, M, I(5))};
  const auto P = frobenius_pullback(E);
  CHECK(P.X->outer().log_r == Rational(0));
  CHECK(P.X->holes()[0].log_r == Rational(-1, 3));
  CHECK(close(P.G1, scalar_const(P.X, M, I(15)), 38));

  const auto X = disk(Q3());
  const auto U = frobenius_pullback(unit_q_equation(X, M, I(4)));
  CHECK(close(U.A, identity_matrix(U.X, M, 1), 38));

  CHECK(frobenius_radius_law(Rational(-3, 2), 3) == Rational(-1, 2));
  CHECK(frobenius_radius_law(Rational(-3), 3) == Rational(-2));
  CHECK(frobenius_radius_law(Rational(-1, 3), 3) == Rational(-1, 9));

  const Field& F = K0();
  const int M2 = 48;
  const auto D = disk(F);
  const auto Pd = frobenius_pullback(dwork(D, M2));
  const Rational tol = estimator_tolerance(M2, 3);
  for (const Rational& rho : {Rational(-1), Rational(-1, 2), Rational(0)}) {
    const auto r = generic_radius(dwork(D, M2), I(0, F), rho, M2);
    const auto rp = generic_radius(Pd, I(0, F), rho / Rational(3), M2);
    REQUIRE(r.log_radius.finite());
    const Rational expected = frobenius_radius_law(r.log_radius.value(), 3);
    CHECK(rp.log_radius <= Ext(expected + tol));
    CHECK(rp.log_radius >= Ext(expected - tol));
  }
}

TEST_CASE("frobenius structures") {
  const int M = 30;
  const auto X = disk(Q3());
  CHECK(verify_frobenius_structure(unit_differential_equation(X, M), identity_matrix(X, M, 1), 2, M, Ext(30)).passed);

  const auto Y = annulus(Q3(), Rational(-1));
  const DifferentialEquation E{Y, identity_matrix(Y, M, 1)};
  const AnalyticFunction T = AnalyticFunction::coordinate(Y, M);
  const auto rep = verify_frobenius_structure(E, scalar(T * T), 1, M, Ext(30));
  CHECK(rep.passed);
  CHECK_FALSE(verify_frobenius_structure(E, scalar(T), 1, M, Ext(30)).passed);
  const auto H = frobenius_matrix_candidate(E, I(1), 1, Rational(-1), M);
  const DiskSeries t2 = T.taylor_at(I(1), M) * T.taylor_at(I(1), M);
  CHECK((H(0, 0) - t2).gauss_valuation_bound(Rational(-1)) >= Ext(30));

  // Dwork: Y(T^p) = exp(pi0 (T^p - T)) Y(T); A(zeta_3, T) becomes trivial in that basis.
  const Field& F = K0();
  const auto D = disk(F, Rational(-1));
  const auto Ed = dwork(D, 48);
  const auto Hs = frobenius_matrix_candidate(Ed, I(0, F), 1, Rational(-1), 48);
  const AnalyticFunction Hf = AnalyticFunction::from_poly(D, 48, Hs(0, 0).coeffs());
  CHECK(verify_frobenius_structure(Ed, scalar(Hf), 1, 48, Ext(30), I(0, F), Rational(-1)).passed);
  const PAdic z = zeta(F);
  const auto Az = deform(Ed, z, {48, false});
  const FunctionMatrix trivial = gauge_transform(Az.E.A, scalar(Hf), z);
  CHECK(close(trivial, identity_matrix(D, 48, 1), 25));
}
