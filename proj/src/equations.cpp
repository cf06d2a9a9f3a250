#include "qconf/equations.hpp"

#include <sstream>

namespace qconf {

namespace {

const Field& field_of(const FunctionMatrix& m) { return m(0, 0).field(); }

// f / T, refusing a pole at 0 inside X.
AnalyticFunction over_T(const AnalyticFunction& f, const char* what) {
  const Field& F = f.field();
  auto [g, r] = f.div_linear(PAdic::zero(F));
  if (!r.is_zero() && r.valuation() < Ext(Rational(F.precision(), 2)))
    throw DomainError(std::string(what) + " does not vanish at T = 0 inside X");
  return g;
}

FunctionMatrix over_T(const FunctionMatrix& m, const char* what) {
  return m.map([&](const AnalyticFunction& f) { return over_T(f, what); });
}

void require_square(const FunctionMatrix& m, const char* what) {
  if (m.rows() == 0 || !m.square()) throw std::invalid_argument(std::string(what) + " must be a nonempty square matrix");
}

void require_compatible(const DomainPtr& X, const FunctionMatrix& m, const char* what) {
  for (const auto& f : m.data()) {
    if (f.domain_ptr() != X && !f.domain().same_as(*X)) throw std::invalid_argument(std::string(what) + ": entry on another domain");
    if (f.order() != m(0, 0).order()) throw std::invalid_argument(std::string(what) + ": mixed truncation orders");
  }
}

void require_same_q(const PAdic& a, const PAdic& b) {
  if (!a.equals(b)) throw std::invalid_argument("equations with different q");
}

void require_same_domain(const DomainPtr& a, const DomainPtr& b) {
  if (a != b && !a->same_as(*b)) throw std::invalid_argument("equations on different domains");
}

PAdic factorial(const Field& F, int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return PAdic::from_int(F, f);
}

FunctionMatrix kron_sum(const FunctionMatrix& a, const FunctionMatrix& b) {
  const DomainPtr& X = a(0, 0).domain_ptr();
  const int M = a(0, 0).order();
  return kronecker(a, identity_matrix(X, M, b.rows())) + kronecker(identity_matrix(X, M, a.rows()), b);
}

FunctionMatrix neg(const FunctionMatrix& m) {
  return m.map([](const AnalyticFunction& f) { return -f; });
}

}  // namespace

FunctionMatrix SigmaDeltaEquation::G() const { return sigma(G1, q) * A; }

QDifferenceEquation unit_q_equation(const DomainPtr& X, int M, const PAdic& q, std::size_t n) {
  return {X, q, identity_matrix(X, M, n)};
}

DifferentialEquation unit_differential_equation(const DomainPtr& X, int M, std::size_t n) {
  return {X, zero_matrix(X, M, n, n)};
}

void validate(const QDifferenceEquation& E) {
  require_square(E.A, "A");
  require_compatible(E.X, E.A, "A");
  if (!E.q.field()) throw std::invalid_argument("q is missing");
  if (!(E.q.log_abs() == Ext(0))) throw std::invalid_argument("|q| != 1");
  (void)inverse(E.A);
}

void validate(const DifferentialEquation& E) {
  require_square(E.G1, "G1");
  require_compatible(E.X, E.G1, "G1");
}

void validate(const SigmaDeltaEquation& E) {
  validate(E.q_part());
  validate(E.delta_part());
  if (E.A.rows() != E.G1.rows()) throw std::invalid_argument("A and G1 have different ranks");
}

std::vector<FunctionMatrix> h_coefficients(const QDifferenceEquation& E, int count) {
  const Field& F = field_of(E.A);
  const PAdic qm1 = E.q - PAdic::one(F);
  if (qm1.is_zero()) throw std::domain_error("h_coefficients: q = 1");
  const std::size_t n = E.rank();
  const int M = E.order();
  std::vector<FunctionMatrix> H{identity_matrix(E.X, M, n)};
  if (count < 1) return H;
  const FunctionMatrix H1 = scaled(over_T(E.A - H[0], "A - Id"), qm1.inverse());
  H.push_back(H1);
  for (int k = 1; k < count; ++k) {
    const FunctionMatrix& Hk = H.back();
    H.push_back(d_q(Hk, E.q) + sigma(Hk, E.q) * H1);
  }
  return H;
}

std::vector<FunctionMatrix> g_coefficients(const DifferentialEquation& E, int count) {
  const std::size_t n = E.rank();
  const int M = E.order();
  std::vector<FunctionMatrix> G{identity_matrix(E.X, M, n)};
  if (count < 1) return G;
  const FunctionMatrix G_1 = over_T(E.G1, "G1");
  G.push_back(G_1);
  for (int k = 1; k < count; ++k) {
    const FunctionMatrix& Gk = G.back();
    G.push_back(derivative(Gk) + Gk * G_1);
  }
  return G;
}

std::vector<FunctionMatrix> f_coefficients(const SigmaDeltaEquation& E, int count) {
  const std::size_t n = E.rank();
  const int M = E.order();
  std::vector<FunctionMatrix> Fm{identity_matrix(E.X, M, n)};
  if (count < 1) return Fm;
  const FunctionMatrix F1 = scaled(over_T(E.G(), "G(q,T)"), E.q.inverse());
  Fm.push_back(F1);
  for (int k = 1; k < count; ++k) {
    const FunctionMatrix& Fk = Fm.back();
    Fm.push_back(sigma(Fk, E.q) * F1 + D_q(Fk, E.q) * E.A);
  }
  return Fm;
}

FunctionMatrix iterate_cocycle(const FunctionMatrix& A, const PAdic& q, int n) {
  if (n < 1) throw std::invalid_argument("iterate_cocycle: n >= 1 required");
  FunctionMatrix acc = A;
  PAdic qk = q;
  for (int k = 1; k < n; ++k) {
    acc = sigma(A, qk) * acc;
    qk *= q;
  }
  return acc;
}

PMatrix TaylorSolution::evaluate(const PAdic& x) const {
  const Field& F = *c.field();
  const std::size_t n = rank();
  PMatrix acc(n, n, PAdic::zero(F));
  PAdic mono = PAdic::one(F);
  PAdic qk = PAdic::one(F);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    for (std::size_t i = 0; i < n * n; ++i) acc.data()[i] += coeffs[k].data()[i] * mono;
    if (basis == SolutionBasis::standard) {
      mono *= x - c;
    } else {
      mono *= x - qk * c;
      qk *= q;
    }
  }
  return acc;
}

Matrix<DiskSeries> TaylorSolution::series(const Rational& log_r) const {
  const Field& F = *c.field();
  const std::size_t n = rank();
  const int M = order();
  Matrix<DiskSeries> out(n, n, DiskSeries());
  std::optional<TwistedBasis> basis_change;
  if (basis == SolutionBasis::twisted) basis_change.emplace(QContext(q, c, M));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<PAdic> a;
      a.reserve(coeffs.size());
      for (const auto& C : coeffs) a.push_back(C(i, j));
      if (basis_change) out(i, j) = basis_change->from_twisted(TwistedSeries{basis_change->context(), std::move(a)}, log_r);
      else out(i, j) = DiskSeries(F, c, log_r, std::move(a));
    }
  return out;
}

TaylorSolution taylor_solution_at(const DifferentialEquation& E, const PAdic& c, int M) {
  const Field& F = field_of(E.G1);
  if (!E.X->contains(c)) throw DomainError("base point " + c.str() + " is not in X");
  const auto G = g_coefficients(E, M);
  TaylorSolution s;
  s.c = c;
  for (int n = 0; n <= M; ++n) {
    const PAdic inv = factorial(F, n).inverse();
    s.coeffs.push_back(evaluate(G[static_cast<std::size_t>(n)], c).map([&](const PAdic& x) { return x * inv; }));
  }
  return s;
}

TaylorSolution taylor_solution_at(const QDifferenceEquation& E, const PAdic& c, int M) {
  if (is_root_of_unity(E.q)) throw std::domain_error("Taylor solution: q is a root of unity, the q-Taylor radius is not defined");
  if (!E.X->contains(c)) throw DomainError("base point " + c.str() + " is not in X");
  const auto H = h_coefficients(E, M);
  TaylorSolution s;
  s.c = c;
  s.basis = SolutionBasis::twisted;
  s.q = E.q;
  for (int n = 0; n <= M; ++n) {
    const PAdic inv = q_factorial(n, E.q).inverse();
    s.coeffs.push_back(evaluate(H[static_cast<std::size_t>(n)], c).map([&](const PAdic& x) { return x * inv; }));
  }
  return s;
}

TaylorSolution taylor_solution_at(const SigmaDeltaEquation& E, const PAdic& c, int M) {
  const Field& F = field_of(E.A);
  if (!E.X->contains(c)) throw DomainError("base point " + c.str() + " is not in X");
  const auto Fm = f_coefficients(E, M);
  TaylorSolution s;
  s.c = c;
  const PAdic q_inv = E.q.inverse();
  // Y^{(n)}(c) = q^{-n(n-1)/2} F_[n](c/q^n) Y(c/q^n) and
  // Y(c/q^n) = (A(c/q) ... A(c/q^n))^{-1} when Y(c) = Id.
  PMatrix P = identity_pmatrix(F, E.rank());
  PAdic point = c;
  for (int n = 0; n <= M; ++n) {
    if (n > 0) {
      point = point * q_inv;
      if (!c.is_exact_zero()) P = P * evaluate(E.A, point);
    }
    const PAdic scale = (factorial(F, n) * E.q.pow(static_cast<std::int64_t>(n) * (n - 1) / 2)).inverse();
    const PMatrix Pi = c.is_exact_zero() ? P : inverse(P);
    s.coeffs.push_back((evaluate(Fm[static_cast<std::size_t>(n)], point) * Pi).map([&](const PAdic& x) { return x * scale; }));
  }
  return s;
}

RadiusData radius_data(const QDifferenceEquation& E, int M) {
  RadiusData D{E.X, E.q, h_coefficients(E, M), {}};
  for (int n = 0; n <= M; ++n) {
    const PAdic f = q_factorial(n, E.q);
    if (f.is_zero()) throw std::domain_error("generic radius: [n]_q! vanishes (q is a root of unity)");
    D.denominator_valuation.push_back(f.valuation());
  }
  return D;
}

RadiusData radius_data(const DifferentialEquation& E, int M) {
  const Field& F = field_of(E.G1);
  RadiusData D{E.X, std::nullopt, g_coefficients(E, M), {}};
  for (int n = 0; n <= M; ++n) D.denominator_valuation.push_back(factorial(F, n).valuation());
  return D;
}

RadiusData radius_data(const SigmaDeltaEquation& E, int M) {
  const Field& F = field_of(E.A);
  RadiusData D{E.X, E.q, f_coefficients(E, M), {}};
  for (int n = 0; n <= M; ++n) D.denominator_valuation.push_back(factorial(F, n).valuation());
  return D;
}

std::string RadiusResult::str() const {
  std::ostringstream os;
  os << "log_p R ~ " << log_radius.str() << " (rho_tX " << rational_str(log_rho_tX) << (saturated ? ", saturated" : "")
     << (truncation_limited ? ", truncation-limited" : "") << "; " << estimate.str() << ")";
  return os.str();
}

RadiusResult generic_radius(const RadiusData& D, const PAdic& c, const Rational& log_rho) {
  const GenericPoint t{c, log_rho};
  if (!D.X->contains_generic(t)) throw DomainError("generic point (" + c.str() + ", p^" + rational_str(log_rho) + ") is not in X");
  RadiusResult r;
  r.log_rho_tX = D.X->rho(t);
  if (D.q) {
    const Ext lhs = (*D.q - PAdic::one(*D.q->field())).log_abs() + max(c.log_abs(), Ext(log_rho));
    if (!(lhs < Ext(log_rho))) throw std::domain_error("radius undefined for this (q, c, rho): |q-1||t| >= rho");
  }
  std::vector<Ext> v;
  std::vector<Ext> vp;
  v.reserve(D.mats.size());
  vp.reserve(D.mats.size());
  const auto to_valuation = [&](const Ext& norm, std::size_t n) {
    return norm.is_neg_inf() ? Ext::inf() : -norm - D.denominator_valuation[n];
  };
  for (std::size_t n = 0; n < D.mats.size(); ++n) {
    const NormResult nr = gauss_norm(D.mats[n], c, log_rho);
    r.truncation_limited = r.truncation_limited || (n > 0 && nr.truncation_limited);
    v.push_back(to_valuation(nr.log_norm, n));
    vp.push_back(to_valuation(max(nr.log_norm, tail_bound(D.mats[n])), n));
  }
  r.estimate = estimate_from_valuations(v);
  r.saturated = r.estimate.log_radius >= Ext(r.log_rho_tX);
  r.log_radius = min(Ext(r.log_rho_tX), r.estimate.log_radius);
  r.pessimistic_log_radius = min(r.log_radius, estimate_from_valuations(vp).log_radius);
  return r;
}

std::vector<ProfilePoint> radius_profile(const RadiusData& D, const PAdic& c, const std::vector<Rational>& grid) {
  std::vector<ProfilePoint> out;
  for (const Rational& rho : grid) {
    ProfilePoint pt{rho, std::nullopt, {}};
    try {
      pt.result = generic_radius(D, c, rho);
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

Ext rough_lower_bound(const SigmaDeltaEquation& E, const PAdic& c, const Rational& log_rho) {
  const Field& F = field_of(E.A);
  const Ext lhs = (E.q - PAdic::one(F)).log_abs() + c.log_abs();
  if (lhs > Ext(log_rho)) throw std::domain_error("rough_lower_bound: |q-1||c| > rho");
  if (Ext(log_rho) > Ext(E.X->rho(c))) throw std::domain_error("rough_lower_bound: rho > rho_{c,X}");
  const Ext nA = gauss_norm(E.A, c, log_rho).log_norm;
  const Ext nG = gauss_norm(E.G(), c, log_rho).log_norm;
  const Ext shift = max(Ext(0), c.log_abs() - Ext(log_rho));
  const Ext denom = max(nA, nG.is_neg_inf() ? nG : nG - shift);
  return Ext(log_omega(F.p())) + Ext(log_rho) - denom;
}

QDifferenceEquation tensor(const QDifferenceEquation& a, const QDifferenceEquation& b) {
  require_same_domain(a.X, b.X);
  require_same_q(a.q, b.q);
  return {a.X, a.q, kronecker(a.A, b.A)};
}

QDifferenceEquation hom(const QDifferenceEquation& m, const QDifferenceEquation& n) {
  require_same_domain(m.X, n.X);
  require_same_q(m.q, n.q);
  return {m.X, m.q, kronecker(n.A, inverse(m.A).transposed())};
}

QDifferenceEquation dual(const QDifferenceEquation& e) { return hom(e, unit_q_equation(e.X, e.order(), e.q)); }

DifferentialEquation tensor(const DifferentialEquation& a, const DifferentialEquation& b) {
  require_same_domain(a.X, b.X);
  return {a.X, kron_sum(a.G1, b.G1)};
}

DifferentialEquation hom(const DifferentialEquation& m, const DifferentialEquation& n) {
  require_same_domain(m.X, n.X);
  return {m.X, kron_sum(n.G1, neg(m.G1.transposed()))};
}

DifferentialEquation dual(const DifferentialEquation& e) { return hom(e, unit_differential_equation(e.X, e.order())); }

SigmaDeltaEquation tensor(const SigmaDeltaEquation& a, const SigmaDeltaEquation& b) {
  const auto q = tensor(a.q_part(), b.q_part());
  return {q.X, q.q, q.A, tensor(a.delta_part(), b.delta_part()).G1};
}

SigmaDeltaEquation hom(const SigmaDeltaEquation& m, const SigmaDeltaEquation& n) {
  const auto q = hom(m.q_part(), n.q_part());
  return {q.X, q.q, q.A, hom(m.delta_part(), n.delta_part()).G1};
}

SigmaDeltaEquation dual(const SigmaDeltaEquation& e) {
  const auto q = dual(e.q_part());
  return {q.X, q.q, q.A, dual(e.delta_part()).G1};
}

Matrix<DiskSeries> taylor_at(const FunctionMatrix& m, const PAdic& c, int order) {
  return m.map([&](const AnalyticFunction& f) { return f.taylor_at(c, order); });
}

Ext series_difference_valuation(const Matrix<DiskSeries>& a, const Matrix<DiskSeries>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("series matrices of different shapes");
  Ext v = Ext::inf();
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    const DiskSeries d = a.data()[k] - b.data()[k];
    v = min(v, d.gauss_valuation_bound(a.data()[k].log_radius()));
  }
  return v;
}

namespace {

void check_solution_shape(const Matrix<DiskSeries>& Y, std::size_t rank) {
  if (Y.rows() != rank || Y.cols() != rank) throw std::invalid_argument("solution matrix has the wrong shape");
  const PMatrix Y0 = Y.map([](const DiskSeries& s) { return s[0]; });
  (void)inverse(Y0);
}

const DiskSeries& any_entry(const Matrix<DiskSeries>& Y) { return Y(0, 0); }

// Re-expanding Y(qx) around c != 0 mixes in the dropped coefficients n > M,
// each damped by (|(q-1)c|/r)^{n-k} at order k. Assuming they obey the same
// Gauss bound as the stored ones, orders above the returned one may be off
// by more than the threshold and are not compared.
int reliable_sigma_order(const Matrix<DiskSeries>& Y, const PAdic& q, const Ext& threshold) {
  const DiskSeries& y = any_entry(Y);
  const int M = y.order();
  const Ext ld = ((q - PAdic::one(y.field())) * y.center()).log_abs();
  if (ld.is_neg_inf()) return M;
  Ext vY = Ext::inf();
  for (const auto& s : Y.data()) vY = min(vY, s.gauss_valuation_bound(y.log_radius()));
  const Ext need = threshold - vY;
  if (!need.finite() || need <= Ext(0)) return M;
  const Rational gap = y.log_radius() - ld.value();
  const Rational steps = need.value() / gap;
  const std::int64_t whole = (steps.numerator() + steps.denominator() - 1) / steps.denominator();
  return static_cast<int>(std::max<std::int64_t>(0, M + 1 - whole));
}

void check_sigma(VerificationReport& rep, const FunctionMatrix& A, const PAdic& q, const Matrix<DiskSeries>& Y) {
  const DiskSeries& y = any_entry(Y);
  const int K = reliable_sigma_order(Y, q, rep.threshold);
  const auto cut = [K](const DiskSeries& s) { return s.truncated(K); };
  const Matrix<DiskSeries> lhs = Y.map([&](const DiskSeries& s) { return s.sigma(q); }).map(cut);
  const Matrix<DiskSeries> rhs = (taylor_at(A, y.center(), y.order()) * Y).map(cut);
  if (K < y.order()) rep.note("sigma-law compared through order " + std::to_string(K));
  rep.check(kSigmaLaw, series_difference_valuation(lhs, rhs));
}

void check_delta(VerificationReport& rep, const FunctionMatrix& G1, const Matrix<DiskSeries>& Y) {
  const DiskSeries& y = any_entry(Y);
  const Matrix<DiskSeries> lhs = Y.map([](const DiskSeries& s) { return s.delta1(); });
  const Matrix<DiskSeries> rhs = taylor_at(G1, y.center(), y.order()) * Y;
  rep.check(kDeltaLaw, series_difference_valuation(lhs, rhs));
}

}  // namespace

VerificationReport solution_check(const QDifferenceEquation& E, const Matrix<DiskSeries>& Y, const Ext& threshold) {
  check_solution_shape(Y, E.rank());
  VerificationReport rep;
  rep.threshold = threshold;
  check_sigma(rep, E.A, E.q, Y);
  return rep;
}

VerificationReport solution_check(const DifferentialEquation& E, const Matrix<DiskSeries>& Y, const Ext& threshold) {
  check_solution_shape(Y, E.rank());
  VerificationReport rep;
  rep.threshold = threshold;
  check_delta(rep, E.G1, Y);
  return rep;
}

VerificationReport solution_check(const SigmaDeltaEquation& E, const Matrix<DiskSeries>& Y, const Ext& threshold) {
  check_solution_shape(Y, E.rank());
  VerificationReport rep;
  rep.threshold = threshold;
  check_sigma(rep, E.A, E.q, Y);
  check_delta(rep, E.G1, Y);
  return rep;
}

}  // namespace qconf
