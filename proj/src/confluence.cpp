#include "qconf/confluence.hpp"

#include <sstream>

namespace qconf {

namespace {

const Field& field_of(const FunctionMatrix& m) { return m(0, 0).field(); }

void shilov_radius(AdmissibilityReport& rep, const RadiusData& D, const Affinoid& X) {
  for (const GenericPoint& t : X.shilov_points()) {
    std::string where = "(" + t.c.str() + ", p^" + rational_str(t.log_rho) + ")";
    try {
      const RadiusResult r = generic_radius(D, t.c, t.log_rho);
      rep.log_R = min(rep.log_R, r.log_radius);
      rep.log_R_pessimistic = min(rep.log_R_pessimistic, r.pessimistic_log_radius);
      rep.diagnostics.push_back("radius at " + where + ": " + r.str());
    } catch (const std::exception& e) {
      rep.inconclusive = true;
      rep.diagnostics.push_back("radius at " + where + " unavailable: " + e.what());
    }
  }
}

void finish(AdmissibilityReport& rep, const Rational& log_r) {
  rep.log_r = log_r;
  rep.q_in_disk = rep.log_q_minus_1 + Ext(rep.log_s_X) < Ext(log_r);
  rep.r_le_R = Ext(log_r) <= rep.log_R;
  if (!rep.r_le_R && Ext(log_r) <= rep.log_R + Ext(rep.tolerance)) {
    rep.inconclusive = true;
    rep.diagnostics.push_back("r lies inside the estimator band below R");
  }
  rep.R_le_r_X = rep.log_R <= Ext(rep.log_r_X);
  if (rep.r_le_R && Ext(log_r) > rep.log_R_pessimistic) {
    rep.inconclusive = true;
    rep.diagnostics.push_back("truncation tails allow R down to " + rep.log_R_pessimistic.str());
  }
}

AdmissibilityReport start(const Affinoid& X, const PAdic& q, int M) {
  AdmissibilityReport rep;
  rep.log_s_X = X.s_X();
  rep.log_r_X = X.r_X();
  rep.log_q_minus_1 = (q - PAdic::one(X.field())).log_abs();
  rep.tolerance = estimator_tolerance(M, X.field().p());
  return rep;
}

// r := R minus the estimator band, so r <= R holds whenever R is trusted.
AdmissibilityReport gate(AdmissibilityReport rep) {
  const Rational log_r = rep.log_R.finite() ? std::min(rep.log_R.value() - rep.tolerance, rep.log_r_X) : rep.log_r_X;
  finish(rep, log_r);
  return rep;
}

// Bound for the dropped terms n > M of a series whose n-th term is of size
// (|q'-1| s_X / R)^n.
Ext family_tail(const AdmissibilityReport& rep, Ext log_step, int M) {
  if (!rep.log_R.finite()) return Ext::neg_inf();
  const Ext ratio = log_step + Ext(rep.log_s_X) - rep.log_R;
  if (ratio.is_neg_inf()) return ratio;
  return ratio * Rational(M + 1);
}

void add_tail(FunctionMatrix& m, const Ext& t) {
  for (auto& f : m.data()) f.set_tail(max(f.tail(), t));
}

FunctionMatrix times_T_power(const FunctionMatrix& m, const AnalyticFunction& Tn) {
  return m.map([&](const AnalyticFunction& f) { return f * Tn; });
}

void require_invertible(const FunctionMatrix& A, bool override_gate, Deformation& d) {
  try {
    (void)inverse(A);
  } catch (const std::exception& e) {
    if (!override_gate) throw std::domain_error(std::string("deformed matrix is not certified invertible: ") + e.what());
    d.certified = false;
    d.admissibility.diagnostics.push_back(std::string("invertibility not certified: ") + e.what());
  }
}

}  // namespace

std::string AdmissibilityReport::str() const {
  std::ostringstream os;
  os << (admissible() ? "admissible" : inconclusive ? "inconclusive" : "not admissible") << ": log R = " << log_R.str()
     << ", log r = " << rational_str(log_r) << ", log s_X = " << rational_str(log_s_X) << ", log r_X = " << rational_str(log_r_X)
     << ", log|q-1| = " << log_q_minus_1.str() << " [q-disk " << q_in_disk << ", r<=R " << r_le_R << ", R<=r_X " << R_le_r_X << "]";
  return os.str();
}

AdmissibilityReport check_admissible(const DifferentialEquation& E, const Rational& log_r, const PAdic& q, int M) {
  AdmissibilityReport rep = start(*E.X, q, M);
  shilov_radius(rep, radius_data(E, M), *E.X);
  finish(rep, log_r);
  return rep;
}

AdmissibilityReport check_admissible(const QDifferenceEquation& E, const Rational& log_r, int M) {
  AdmissibilityReport rep = start(*E.X, E.q, M);
  shilov_radius(rep, radius_data(E, M), *E.X);
  finish(rep, log_r);
  return rep;
}

Deformation deform(const DifferentialEquation& E, const PAdic& q_prime, const DeformOptions& opt) {
  validate(E);
  const Field& F = field_of(E.G1);
  const int M = opt.M;
  const DifferentialEquation Em{E.X, E.G1.map([&](const AnalyticFunction& f) { return f.with_order(M); })};
  Deformation d;
  AdmissibilityReport pre = start(*E.X, q_prime, M);
  shilov_radius(pre, radius_data(Em, M), *E.X);
  d.admissibility = gate(std::move(pre));
  d.certified = d.admissibility.admissible();
  if (!d.certified && !opt.override_admissibility) throw std::domain_error("deform: " + d.admissibility.str());

  const PAdic step = q_prime - PAdic::one(F);
  const auto G = g_coefficients(Em, M);
  const AnalyticFunction T = AnalyticFunction::coordinate(E.X, M);
  FunctionMatrix A = G[0];
  AnalyticFunction Tn = AnalyticFunction::constant(E.X, M, PAdic::one(F));
  PAdic factor = PAdic::one(F);
  for (int n = 1; n <= M; ++n) {
    Tn = Tn * T;
    factor = factor * step * PAdic::from_int(F, n).inverse();
    A = A + scaled(times_T_power(G[static_cast<std::size_t>(n)], Tn), factor);
  }
  add_tail(A, family_tail(d.admissibility, step.log_abs(), M));
  d.E = QDifferenceEquation{E.X, q_prime, A};
  require_invertible(A, opt.override_admissibility, d);
  return d;
}

Deformation deform_between(const QDifferenceEquation& E, const PAdic& q_prime, const DeformOptions& opt) {
  validate(E);
  if (is_root_of_unity(E.q)) throw std::domain_error("deform_between: q is a root of unity");
  const Field& F = field_of(E.A);
  const int M = opt.M;
  const QDifferenceEquation Em{E.X, E.q, E.A.map([&](const AnalyticFunction& f) { return f.with_order(M); })};
  Deformation d;
  AdmissibilityReport pre = start(*E.X, E.q, M);
  pre.log_q_minus_1 = max(pre.log_q_minus_1, (q_prime - PAdic::one(F)).log_abs());
  shilov_radius(pre, radius_data(Em, M), *E.X);
  d.admissibility = gate(std::move(pre));
  d.certified = d.admissibility.admissible();
  if (!d.certified && !opt.override_admissibility) throw std::domain_error("deform_between: " + d.admissibility.str());

  const auto H = h_coefficients(Em, M);
  const AnalyticFunction T = AnalyticFunction::coordinate(E.X, M);
  FunctionMatrix A = H[0];
  AnalyticFunction Tn = AnalyticFunction::constant(E.X, M, PAdic::one(F));
  PAdic poly = PAdic::one(F);  // prod_{k<n} (q' - q^k)
  PAdic qk = PAdic::one(F);
  for (int n = 1; n <= M; ++n) {
    Tn = Tn * T;
    poly = poly * (q_prime - qk);
    qk = qk * E.q;
    if (poly.is_exact_zero()) break;
    const PAdic factor = poly * q_factorial(n, E.q).inverse();
    A = A + scaled(times_T_power(H[static_cast<std::size_t>(n)], Tn), factor);
  }
  if (!poly.is_exact_zero()) add_tail(A, family_tail(d.admissibility, d.admissibility.log_q_minus_1, M));
  d.E = QDifferenceEquation{E.X, q_prime, A};
  require_invertible(A, opt.override_admissibility, d);
  return d;
}

ConfluenceResult confluence(const QDifferenceEquation& E, const ConfluenceOptions& opt) {
  validate(E);
  if (is_root_of_unity(E.q)) throw std::domain_error("confluence: q is a root of unity");
  const Field& F = field_of(E.A);
  const int M = opt.M;
  const QDifferenceEquation Em{E.X, E.q, E.A.map([&](const AnalyticFunction& f) { return f.with_order(M); })};
  const PAdic qm1 = E.q - PAdic::one(F);
  ConfluenceResult res;
  res.mode = opt.mode;

  if (opt.mode == ConfluenceMode::derivative_of_family) {
    // d/dQ at Q = 1 of prod_{k<n}(Q - q^k) / [n]_q! is (-1)^{n-1} (q-1)^{n-1} / [n]_q.
    const auto H = h_coefficients(Em, M);
    const AnalyticFunction T = AnalyticFunction::coordinate(E.X, M);
    FunctionMatrix G1 = zero_matrix(E.X, M, E.rank(), E.rank());
    AnalyticFunction Tn = AnalyticFunction::constant(E.X, M, PAdic::one(F));
    PAdic factor = PAdic::one(F);
    for (int n = 1; n <= M; ++n) {
      Tn = Tn * T;
      if (n > 1) factor = -(factor * qm1);
      G1 = G1 + scaled(times_T_power(H[static_cast<std::size_t>(n)], Tn), factor * q_integer(n, E.q).inverse());
    }
    AdmissibilityReport rep = start(*E.X, E.q, M);
    shilov_radius(rep, radius_data(Em, M), *E.X);
    rep = gate(std::move(rep));
    add_tail(G1, family_tail(rep, rep.log_q_minus_1, M));
    if (!rep.admissible()) res.diagnostics.push_back("input not certified admissible: " + rep.str());
    res.E = DifferentialEquation{E.X, G1};
    return res;
  }

  // Delta_n = (A(q^{p^n}, T) - Id) / (q^{p^n} - 1), A(q^{p^n}) by cocycle products.
  const int p = F.p();
  const FunctionMatrix Id = identity_matrix(E.X, M, E.rank());
  FunctionMatrix An = Em.A;
  PAdic Q = E.q;
  FunctionMatrix Delta = scaled(An - Id, qm1.inverse());
  for (int n = 1; n <= opt.steps; ++n) {
    An = iterate_cocycle(An, Q, p);
    Q = Q.pow(p);
    const PAdic Qm1 = Q - PAdic::one(F);
    if (Qm1.is_zero()) {
      res.converged = false;
      res.diagnostics.push_back("q^{p^n} - 1 vanished at precision at step " + std::to_string(n));
      break;
    }
    FunctionMatrix next = scaled(An - Id, Qm1.inverse());
    const Ext v = difference_valuation(next - Delta);
    res.growth.push_back(v);
    res.diagnostics.push_back("step " + std::to_string(n) + ": v(Delta_n - Delta_{n-1}) = " + v.str());
    Delta = std::move(next);
  }
  const Ext cap(static_cast<std::int64_t>(F.precision()) - static_cast<std::int64_t>(opt.steps) - 2);
  for (std::size_t k = 1; k < res.growth.size(); ++k)
    if (!(res.growth[k] > res.growth[k - 1]) && res.growth[k - 1] < cap) res.converged = false;
  if (!res.converged) res.diagnostics.push_back("valuation growth stalled");
  res.E = DifferentialEquation{E.X, Delta};
  return res;
}

VerificationReport roundtrip_check(const DifferentialEquation& E, const PAdic& q, int M, const Ext& threshold) {
  VerificationReport rep;
  rep.threshold = threshold;
  const Deformation d = deform(E, q, {M, false});
  const ConfluenceResult c = confluence(d.E, {M, ConfluenceMode::derivative_of_family, 6});
  const FunctionMatrix G = E.G1.map([&](const AnalyticFunction& f) { return f.with_order(M); });
  rep.check(kRoundtripDiff, difference_valuation(c.E.G1 - G));
  for (const auto& s : c.diagnostics) rep.note(s);
  return rep;
}

VerificationReport roundtrip_check(const QDifferenceEquation& E, int M, const Ext& threshold) {
  VerificationReport rep;
  rep.threshold = threshold;
  const ConfluenceResult c = confluence(E, {M, ConfluenceMode::derivative_of_family, 6});
  for (const auto& s : c.diagnostics) rep.note(s);
  const Deformation d = deform(c.E, E.q, {M, false});
  const FunctionMatrix A = E.A.map([&](const AnalyticFunction& f) { return f.with_order(M); });
  rep.check(kRoundtripQ, difference_valuation(d.E.A - A));
  return rep;
}

FunctionMatrix gauge_transform(const FunctionMatrix& A, const FunctionMatrix& P, const PAdic& q) {
  return sigma(P, q) * A * inverse(P);
}

FunctionMatrix gauge_transform_delta(const FunctionMatrix& G1, const FunctionMatrix& P) {
  const FunctionMatrix Pi = inverse(P);
  return delta1(P) * Pi + P * G1 * Pi;
}

DomainPtr frobenius_preimage(const Affinoid& X, int p) {
  if (!X.outer().c.is_zero()) throw DomainError("Frobenius preimage needs the domain centered at 0");
  std::vector<Disk> holes;
  for (const Disk& h : X.holes()) {
    if (!h.c.is_zero()) throw DomainError("Frobenius preimage needs holes centered at 0");
    holes.push_back({h.c, h.log_r / Rational(p)});
  }
  return std::make_shared<const Affinoid>(Affinoid(X.field(), {X.outer().c, X.outer().log_r / Rational(p)}, std::move(holes)));
}

namespace {

FunctionMatrix substitute(const FunctionMatrix& m, int p, const DomainPtr& target) {
  return m.map([&](const AnalyticFunction& f) { return f.frobenius_substitute(p, target); });
}

}  // namespace

DifferentialEquation frobenius_pullback(const DifferentialEquation& E) {
  const int p = E.X->field().p();
  const DomainPtr Y = frobenius_preimage(*E.X, p);
  return {Y, scaled(substitute(E.G1, p, Y), PAdic::from_int(E.X->field(), p))};
}

QDifferenceEquation frobenius_pullback(const QDifferenceEquation& E) {
  const int p = E.X->field().p();
  const DomainPtr Y = frobenius_preimage(*E.X, p);
  return {Y, E.q, substitute(iterate_cocycle(E.A, E.q, p), p, Y)};
}

SigmaDeltaEquation frobenius_pullback(const SigmaDeltaEquation& E) {
  const int p = E.X->field().p();
  const DomainPtr Y = frobenius_preimage(*E.X, p);
  return {Y, E.q, substitute(iterate_cocycle(E.A, E.q, p), p, Y),
          scaled(substitute(E.G1, p, Y), PAdic::from_int(E.X->field(), p))};
}

Rational frobenius_radius_law(const Rational& log_r, int p) { return std::min(log_r / Rational(p), log_r + Rational(1)); }

namespace {

// Y(T^{p^h}, c) at c, c fixed by T -> T^{p^h}.
Matrix<DiskSeries> frobenius_composed(const Matrix<DiskSeries>& Y, const PAdic& c, int p, int h) {
  const Field& F = *c.field();
  std::int64_t e = 1;
  for (int k = 0; k < h; ++k) e *= p;
  const PAdic ce = c.pow(e);
  if ((ce - c).valuation() < Ext(Rational(F.precision(), 2))) throw DomainError("base point " + c.str() + " is not fixed by T -> T^{p^h}");
  const DiskSeries& y = Y(0, 0);
  const int M = y.order();
  // (c + u)^e - c, truncated at order M
  std::vector<PAdic> g(static_cast<std::size_t>(M) + 1, PAdic::zero(F));
  for (std::int64_t k = 1; k <= std::min<std::int64_t>(e, M); ++k)
    g[static_cast<std::size_t>(k)] = binomial(F, static_cast<long>(e), static_cast<long>(k)) * c.pow(e - k);
  const DiskSeries gs(F, c, y.log_radius(), std::move(g));
  return Y.map([&](const DiskSeries& s) { return s.compose(gs); });
}

Rational default_log_r(const DifferentialEquation& E, const PAdic& c, int M) {
  const Rational rho = E.X->rho(c);
  const RadiusResult r = generic_radius(radius_data(E, M), c, rho);
  const Rational tol = estimator_tolerance(M, E.X->field().p());
  return r.log_radius.finite() ? std::min(rho, r.log_radius.value() - tol) : rho;
}

}  // namespace

Matrix<DiskSeries> frobenius_matrix_candidate(const DifferentialEquation& E, const PAdic& c, int h, const Rational& log_r, int M) {
  const int p = E.X->field().p();
  const Matrix<DiskSeries> Y = taylor_solution_at(E, c, M).series(log_r);
  // Y^{-1} is the transpose of the dual equation's solution.
  const Matrix<DiskSeries> Yinv = taylor_solution_at(dual(E), c, M).series(log_r).transposed();
  return frobenius_composed(Y, c, p, h) * Yinv;
}

VerificationReport verify_frobenius_structure(const DifferentialEquation& E, const FunctionMatrix& H, int h, int M,
                                              const Ext& threshold, std::optional<PAdic> c, std::optional<Rational> log_r) {
  const Field& F = E.X->field();
  const PAdic base = c ? *c : PAdic::one(F);
  if (!E.X->contains(base)) throw DomainError("base point " + base.str() + " is not in X");
  const DifferentialEquation Em{E.X, E.G1.map([&](const AnalyticFunction& f) { return f.with_order(M); })};
  const Rational lr = log_r ? *log_r : default_log_r(Em, base, M);
  const Matrix<DiskSeries> Y = taylor_solution_at(Em, base, M).series(lr);
  VerificationReport rep;
  rep.threshold = threshold;
  rep.note("compared on the disk of log radius " + rational_str(lr) + " around " + base.str());
  const Matrix<DiskSeries> lhs = frobenius_composed(Y, base, F.p(), h);
  const Matrix<DiskSeries> rhs = taylor_at(H, base, M) * Y;
  rep.check(kFrobeniusLaw, series_difference_valuation(lhs, rhs));
  return rep;
}

}  // namespace qconf
