#include <random>

#include "doctest.h"
#include "qconf/equations.hpp"

using namespace qconf;

namespace {

const Field& Q3() { return make_field(3, -1, 40); }
const Field& K0() { return make_field(3, 0, 40); }
PAdic I(long n, const Field& F = Q3()) { return PAdic::from_int(F, n); }

DomainPtr disk(const Field& F, const Rational& log_r = Rational(0)) {
  return std::make_shared<const Affinoid>(Affinoid::disk(F, PAdic::zero(F), log_r));
}
// {log_r <= log|x| <= 0} with the hole centered at 0
DomainPtr annulus(const Field& F, long log_r) {
  return std::make_shared<const Affinoid>(Affinoid(F, {PAdic::zero(F), Rational(0)}, {{PAdic::zero(F), Rational(log_r)}}));
}

FunctionMatrix scalar(const AnalyticFunction& f) { return FunctionMatrix(1, 1, f); }
FunctionMatrix scalar_const(const DomainPtr& X, int M, const PAdic& a) { return scalar(AnalyticFunction::constant(X, M, a)); }

// exp(lambda T) truncated at order M, with the tail bounded from v(n!) <= n/(p-1).
AnalyticFunction exp_function(const DomainPtr& X, int M, const PAdic& lambda) {
  const Field& F = X->field();
  std::vector<PAdic> a;
  PAdic term = PAdic::one(F);
  for (int n = 0; n <= M; ++n) {
    a.push_back(term);
    term = term * lambda * PAdic::from_int(F, n + 1).inverse();
  }
  AnalyticFunction f = AnalyticFunction::from_poly(X, M, a);
  f.set_tail((lambda.log_abs() - Ext(log_omega(F.p()))) * Rational(M + 1));
  return f;
}

Matrix<DiskSeries> series_of(const DiskSeries& s) { return Matrix<DiskSeries>(1, 1, s); }

bool close(const FunctionMatrix& a, const FunctionMatrix& b, long digits) {
  return difference_valuation(a - b) >= Ext(digits);
}

bool close(const PMatrix& a, const PMatrix& b, long digits) {
  PMatrix d = a;
  for (std::size_t k = 0; k < d.data().size(); ++k) d.data()[k] = a.data()[k] - b.data()[k];
  return min_valuation(d) >= Ext(digits);
}

FunctionMatrix random_perturbation(const DomainPtr& X, int M, std::size_t n, std::mt19937_64& rng, const PAdic& scale) {
  std::uniform_int_distribution<long> coef(-20, 20);
  const Field& F = X->field();
  FunctionMatrix m = identity_matrix(X, M, n);
  for (auto& f : m.data()) {
    std::vector<PAdic> a{PAdic::zero(F)};
    for (int k = 1; k <= 3; ++k) a.push_back(PAdic::from_int(F, coef(rng)) * scale);
    f = f + AnalyticFunction::from_T_poly(X, M, a);
  }
  return m;
}

}  // namespace

TEST_CASE("h_coefficients examples") {
  const PAdic q = I(4);
  const int M = 12;
  const auto X = disk(Q3());
  const auto unit = unit_q_equation(X, M, q);
  const auto H = h_coefficients(unit, 5);
  REQUIRE(H.size() == 6);
  for (int n = 1; n <= 5; ++n) CHECK(close(H[static_cast<std::size_t>(n)], zero_matrix(X, M, 1, 1), 38));

  const AnalyticFunction qexp = AnalyticFunction::from_T_poly(X, M, {I(1), q - I(1)});
  const auto Hq = h_coefficients(QDifferenceEquation{X, q, scalar(qexp)}, 6);
  for (const auto& h : Hq) CHECK(close(h, identity_matrix(X, M, 1), 36));

  const auto Y = annulus(Q3(), -1);
  const auto Ht = h_coefficients(QDifferenceEquation{Y, q, scalar_const(Y, M, q)}, 4);
  CHECK(close(Ht[1], scalar(AnalyticFunction::hole_term(Y, M, 0, 1, I(1))), 36));
  for (int n = 2; n <= 4; ++n) CHECK(close(Ht[static_cast<std::size_t>(n)], zero_matrix(Y, M, 1, 1), 30));

  CHECK_THROWS_AS(h_coefficients(QDifferenceEquation{X, q, scalar_const(X, M, q)}, 2), DomainError);
  CHECK_THROWS_AS(h_coefficients(unit_q_equation(X, M, I(1)), 2), std::domain_error);
}

TEST_CASE("g_coefficients examples") {
  const int M = 12;
  const auto X = disk(Q3());
  const auto G0 = g_coefficients(unit_differential_equation(X, M), 4);
  for (int n = 1; n <= 4; ++n) CHECK(close(G0[static_cast<std::size_t>(n)], zero_matrix(X, M, 1, 1), 38));

  const auto Y = annulus(Q3(), -1);
  const PAdic a0 = I(5);
  const auto G = g_coefficients(DifferentialEquation{Y, scalar_const(Y, M, a0)}, 2);
  CHECK(close(G[1], scalar(AnalyticFunction::hole_term(Y, M, 0, 1, a0)), 38));
  CHECK(close(G[2], scalar(AnalyticFunction::hole_term(Y, M, 0, 2, a0 * (a0 - I(1)))), 38));

  const auto D = disk(K0());
  const PAdic pi0 = pi_m(K0(), 0);
  const auto Gd = g_coefficients(DifferentialEquation{D, scalar(AnalyticFunction::from_T_poly(D, M, {PAdic::zero(K0()), pi0}))}, 6);
  for (int n = 0; n <= 6; ++n) CHECK(close(Gd[static_cast<std::size_t>(n)], scalar_const(D, M, pi0.pow(n)), 36));
}

TEST_CASE("Dwork Taylor solutions are exp(pi0 (x - c))") {
  const Field& F = K0();
  const int M = 24;
  const auto X = disk(F);
  const PAdic pi0 = pi_m(F, 0);
  const PAdic q = I(4, F);
  const DifferentialEquation dwork{X, scalar(AnalyticFunction::from_T_poly(X, M, {PAdic::zero(F), pi0}))};
  const SigmaDeltaEquation pair{X, q, scalar(exp_function(X, M, pi0 * (q - I(1, F)))), dwork.G1};
  validate(pair);

  for (long c : {0L, 3L}) {
    const PAdic cc = I(c, F);
    const DiskSeries expected = exp_series(DiskSeries::variable(F, cc, Rational(-1, 2), M).scaled(pi0));
    for (const TaylorSolution& s : {taylor_solution_at(dwork, cc, M), taylor_solution_at(pair, cc, M)}) {
      REQUIRE(s.order() == M);
      for (int n = 0; n <= M; ++n)
        CHECK((s.coeffs[static_cast<std::size_t>(n)](0, 0) - expected[static_cast<std::size_t>(n)]).valuation_bound() >= Ext(25));
    }
    const auto Ys = taylor_solution_at(pair, cc, M).series(Rational(-1, 2));
    const auto rep = solution_check(pair, Ys, Ext(25));
    CHECK(rep.passed);
    CHECK(solution_check(pair.q_part(), series_of(expected), Ext(25)).passed);
  }
}

TEST_CASE("q-exponential Taylor solution in the twisted basis") {
  const int M = 16;
  const auto X = disk(Q3());
  const PAdic q = I(4);
  const QDifferenceEquation E{X, q, scalar(AnalyticFunction::from_T_poly(X, M, {I(1), q - I(1)}))};
  const PAdic c = I(3);
  const auto s = taylor_solution_at(E, c, M);
  CHECK(s.basis == SolutionBasis::twisted);
  for (int n = 0; n <= M; ++n)
    CHECK((s.coeffs[static_cast<std::size_t>(n)](0, 0) * q_factorial(n, q) - I(1)).valuation_bound() >= Ext(30));
  CHECK(close(s.evaluate(c), identity_pmatrix(Q3(), 1), 38));
  const auto rep = solution_check(E, s.series(Rational(-1)), Ext(20));
  CHECK(rep.passed);

  const Field& K1 = make_field(3, 1, 20);
  const auto Z = disk(K1);
  const PAdic z = zeta(K1);
  CHECK_THROWS_AS(taylor_solution_at(unit_q_equation(Z, 8, z), PAdic::zero(K1), 8), std::domain_error);
  CHECK_THROWS_AS(radius_data(unit_q_equation(Z, 10, z), 10), std::domain_error);
}

TEST_CASE("solution_check reports the failing law of an incompatible pair") {
  const int M = 20;
  const auto X = disk(Q3());
  const PAdic q = I(10);
  const SigmaDeltaEquation pair{X, q, scalar(exp_function(X, M, q - I(1))), zero_matrix(X, M, 1, 1)};
  const DiskSeries y = exp_series(DiskSeries::variable(Q3(), I(0), Rational(-1), M));
  const auto rep = solution_check(pair, series_of(y), Ext(25));
  CHECK_FALSE(rep.passed);
  CHECK(rep.failed_law == std::string(kDeltaLaw));
  CHECK(solution_check(pair.q_part(), series_of(y), Ext(25)).passed);

  const auto unit = unit_q_equation(X, M, q, 2);
  Matrix<DiskSeries> id(2, 2, DiskSeries::zero(Q3(), I(0), Rational(0), M));
  id(0, 0) = id(1, 1) = DiskSeries::constant(Q3(), I(0), Rational(0), M, I(1));
  const auto ok = solution_check(unit, id, Ext(30));
  CHECK(ok.passed);
  CHECK(ok.min_difference_valuation >= Ext(38));
  Matrix<DiskSeries> singular = id;
  singular(1, 1) = DiskSeries::zero(Q3(), I(0), Rational(0), M);
  CHECK_THROWS(solution_check(unit, singular, Ext(30)));
}

TEST_CASE("generic radius examples") {
  const int M = 48;
  const auto X = disk(Q3());
  const auto unit = generic_radius(unit_q_equation(X, M, I(4)), I(0), Rational(-1), M);
  CHECK(unit.saturated);
  CHECK(unit.log_radius == Ext(0));

  const Field& F = K0();
  const auto D = disk(F);
  const PAdic pi0 = pi_m(F, 0);
  const DifferentialEquation dwork{D, scalar(AnalyticFunction::from_T_poly(D, M, {PAdic::zero(F), pi0}))};
  const auto r = generic_radius(dwork, I(0, F), Rational(0), M);
  const Rational tol = estimator_tolerance(M, 3);
  CHECK(r.log_radius <= Ext(0));
  CHECK(r.log_radius >= Ext(-tol));

  const auto Y = annulus(Q3(), -2);
  const auto qa = generic_radius(QDifferenceEquation{Y, I(4), scalar_const(Y, M, I(4))}, I(0), Rational(-1), M);
  CHECK(qa.saturated);
  CHECK(qa.log_radius == Ext(-1));

  CHECK_THROWS_AS(generic_radius(unit_q_equation(X, M, I(2)), I(1), Rational(-1), M), std::domain_error);
  CHECK_THROWS_AS(generic_radius(unit_q_equation(X, M, I(4)), I(0), Rational(1), M), DomainError);
}

TEST_CASE("rough lower bound examples") {
  const int M = 16;
  const auto X = disk(Q3());
  const PAdic q = I(4);
  const SigmaDeltaEquation y_is_T{X, q, scalar_const(X, M, q), identity_matrix(X, M, 1)};
  CHECK(close(y_is_T.G(), scalar_const(X, M, q), 38));
  CHECK(rough_lower_bound(y_is_T, I(1), Rational(0)) == Ext(-1, 2));

  const SigmaDeltaEquation unit{X, q, identity_matrix(X, M, 1), zero_matrix(X, M, 1, 1)};
  CHECK(rough_lower_bound(unit, I(0), Rational(-1)) == Ext(-3, 2));

  const Field& F = K0();
  const auto D = disk(F);
  const PAdic pi0 = pi_m(F, 0);
  const PAdic qk = I(4, F);
  const SigmaDeltaEquation dwork{D, qk, scalar(exp_function(D, M, pi0 * (qk - I(1, F)))),
                                 scalar(AnalyticFunction::from_T_poly(D, M, {PAdic::zero(F), pi0}))};
  CHECK(gauss_norm(dwork.A, I(0, F), Rational(0)).log_norm == Ext(0));
  CHECK(rough_lower_bound(dwork, I(0, F), Rational(0)) == Ext(-1, 2));

  CHECK_THROWS_AS(rough_lower_bound(unit, I(0), Rational(1)), std::domain_error);
}

TEST_CASE("radius profiles") {
  const int M = 48;
  const Rational tol = estimator_tolerance(M, 3);
  const auto Y = annulus(Q3(), -2);
  const DifferentialEquation power{Y, scalar_const(Y, M, PAdic::from_rational(Q3(), Rational(1, 2)))};
  const std::vector<Rational> grid{Rational(-2), Rational(-3, 2), Rational(-1), Rational(-1, 2), Rational(0)};
  const auto prof = radius_profile(radius_data(power, M), I(0), grid);
  REQUIRE(prof.size() == grid.size());
  for (const auto& pt : prof) {
    REQUIRE(pt.result);
    CHECK(pt.result->log_radius <= Ext(pt.log_rho));
    CHECK(pt.result->log_radius >= Ext(pt.log_rho - tol));
  }

  const Field& F = K0();
  const auto D = disk(F);
  const DifferentialEquation dwork{D, scalar(AnalyticFunction::from_T_poly(D, M, {PAdic::zero(F), pi_m(F, 0)}))};
  const auto dp = radius_profile(radius_data(dwork, M), I(0, F), {Rational(-2), Rational(-1), Rational(0), Rational(1)});
  REQUIRE(dp[0].result);
  for (std::size_t k = 1; k < 3; ++k) {
    REQUIRE(dp[k].result);
    CHECK(dp[k].result->log_radius >= dp[k - 1].result->log_radius);
  }
  CHECK_FALSE(dp[3].result);
  CHECK_FALSE(dp[3].error.empty());
}

TEST_CASE("tensor, hom and dual") {
  const int M = 12;
  const auto X = disk(Q3());
  const PAdic q = I(4);
  const auto qexp = [&](long lambda) {
    return QDifferenceEquation{X, q, scalar(AnalyticFunction::from_T_poly(X, M, {I(1), (q - I(1)) * I(lambda)}))};
  };
  const auto t = tensor(qexp(2), qexp(5));
  const AnalyticFunction expected = AnalyticFunction::from_T_poly(X, M, {I(1), (q - I(1)) * I(7), (q - I(1)).pow(2) * I(10)});
  CHECK(close(t.A, scalar(expected), 38));
  CHECK(close(tensor(unit_q_equation(X, M, q), qexp(2)).A, qexp(2).A, 38));

  std::mt19937_64 rng(7);
  const QDifferenceEquation E{X, q, random_perturbation(X, M, 2, rng, I(3))};
  CHECK(close(tensor(unit_q_equation(X, M, q), E).A, E.A, 38));
  const auto dd = dual(dual(qexp(2)));
  CHECK(close(dd.A, qexp(2).A, 30));
  CHECK(close(dual(E).A * E.A.transposed(), identity_matrix(X, M, 2), 30));
  CHECK(close(dual(dual(E)).A, E.A, 28));
  CHECK(hom(E, E).rank() == 4);
  CHECK_THROWS_AS(tensor(qexp(1), unit_q_equation(X, M, I(7))), std::invalid_argument);

  const DifferentialEquation d{X, random_perturbation(X, M, 2, rng, I(1))};
  CHECK(close(dual(d).G1, d.G1.transposed().map([](const AnalyticFunction& f) { return -f; }), 38));
  const auto h = hom(d, d);
  CHECK(h.rank() == 4);
  // Id is a horizontal element of End(M): (G (x) 1 - 1 (x) G^T) vec(Id) = 0.
  FunctionMatrix vec_id = zero_matrix(X, M, 4, 1);
  vec_id(0, 0) = vec_id(3, 0) = AnalyticFunction::constant(X, M, I(1));
  CHECK(close(h.G1 * vec_id, zero_matrix(X, M, 4, 1), 38));
}

TEST_CASE("iterated cocycle does not depend on bracketing") {
  const int M = 12;
  const auto X = disk(Q3());
  const PAdic q = I(4);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const FunctionMatrix A = random_perturbation(X, M, 2, rng, I(3));
    const FunctionMatrix A2 = iterate_cocycle(A, q, 2);
    const FunctionMatrix A3 = iterate_cocycle(A, q, 3);
    CHECK(close(A3, sigma(A2, q) * A, 30));
    CHECK(close(A3, sigma(A, q * q) * A2, 30));
    CHECK(close(iterate_cocycle(A, q, 1), A, 40));
  }
}

TEST_CASE("transfer bound on the coefficients H_n") {
  const int M = 16;
  const auto X = disk(Q3());
  const PAdic q = I(4);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    FunctionMatrix A = identity_matrix(X, M, 2);
    const FunctionMatrix B = random_perturbation(X, M, 2, rng, I(1));
    A = A + scaled(B, q - I(1)).map([&](const AnalyticFunction& f) { return f * AnalyticFunction::coordinate(X, M); });
    const auto H = h_coefficients(QDifferenceEquation{X, q, A}, 10);
    const Ext base = max(sup_norm(H[1]).log_norm, Ext(0) - Ext(X->r_X()));
    for (int n = 1; n <= 10; ++n) CHECK(sup_norm(H[static_cast<std::size_t>(n)]).log_norm <= base * Rational(n));
  }
}

TEST_CASE("generic radius is invariant under change of basis") {
  const int M = 40;
  const Field& F = K0();
  const auto D = disk(F);
  const PAdic q = I(4, F);
  const PAdic pi0 = pi_m(F, 0);
  FunctionMatrix A = identity_matrix(D, M, 2);
  A(0, 0) = exp_function(D, M, pi0 * (q - I(1, F)));
  std::mt19937_64 rng(3);
  const FunctionMatrix P = random_perturbation(D, M, 2, rng, I(3, F));
  const FunctionMatrix A2 = sigma(P, q) * A * inverse(P);
  const Rational tol = estimator_tolerance(M, 3);
  for (const Rational& rho : {Rational(-1), Rational(0)}) {
    const auto r1 = generic_radius(QDifferenceEquation{D, q, A}, I(0, F), rho, M);
    const auto r2 = generic_radius(QDifferenceEquation{D, q, A2}, I(0, F), rho, M);
    CHECK(r1.log_radius <= r2.log_radius + Ext(tol));
    CHECK(r2.log_radius <= r1.log_radius + Ext(tol));
  }
}

TEST_CASE("solutions form a cocycle") {
  const int M = 30;
  const Field& F = K0();
  const auto D = disk(F);
  const PAdic pi0 = pi_m(F, 0);
  FunctionMatrix G1 = zero_matrix(D, M, 2, 2);
  const AnalyticFunction T = AnalyticFunction::coordinate(D, M);
  G1(0, 0) = G1(1, 1) = T.scaled(pi0);
  G1(0, 1) = T;
  const DifferentialEquation E{D, G1};
  const std::vector<long> pts{0, 3, -6, 9};
  std::vector<TaylorSolution> sol;
  for (long y : pts) sol.push_back(taylor_solution_at(E, I(y, F), M));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const PMatrix xy = sol[j].evaluate(I(pts[i], F));
      CHECK(close(inverse(xy), sol[i].evaluate(I(pts[j], F)), 12));
      for (std::size_t k = 0; k < pts.size(); ++k)
        CHECK(close(xy * sol[k].evaluate(I(pts[j], F)), sol[k].evaluate(I(pts[i], F)), 12));
    }
  // at most rank many independent solution columns
  const auto s = taylor_solution_at(E, I(0, F), M);
  CHECK(s.rank() == 2);
  CHECK(close(s.evaluate(I(0, F)), identity_pmatrix(F, 2), 38));
}
