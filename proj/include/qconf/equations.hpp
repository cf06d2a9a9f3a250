#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qconf/analytic.hpp"
#include "qconf/pmatrix.hpp"
#include "qconf/qcalc.hpp"
#include "qconf/report.hpp"

namespace qconf {

// sigma_q Y = A Y
struct QDifferenceEquation {
  DomainPtr X;
  PAdic q;
  FunctionMatrix A;
  std::size_t rank() const { return A.rows(); }
  int order() const { return A(0, 0).order(); }
};

// delta_1 Y = G1 Y
struct DifferentialEquation {
  DomainPtr X;
  FunctionMatrix G1;
  std::size_t rank() const { return G1.rows(); }
  int order() const { return G1(0, 0).order(); }
};

// Both laws at once; compatibility is tested, never assumed.
struct SigmaDeltaEquation {
  DomainPtr X;
  PAdic q;
  FunctionMatrix A;
  FunctionMatrix G1;
  std::size_t rank() const { return A.rows(); }
  int order() const { return A(0, 0).order(); }
  // Matrix of delta_q = sigma_q o delta_1: G(q, T) = sigma_q(G1) A.
  FunctionMatrix G() const;
  QDifferenceEquation q_part() const { return {X, q, A}; }
  DifferentialEquation delta_part() const { return {X, G1}; }
};

QDifferenceEquation unit_q_equation(const DomainPtr& X, int M, const PAdic& q, std::size_t n = 1);
DifferentialEquation unit_differential_equation(const DomainPtr& X, int M, std::size_t n = 1);

// Shape checks plus an invertibility certificate for A; throws.
void validate(const QDifferenceEquation& E);
void validate(const DifferentialEquation& E);
void validate(const SigmaDeltaEquation& E);

// H_0 = Id, H_1 = (A - Id)/((q-1)T), H_{n+1} = d_q(H_n) + sigma_q(H_n) H_1
std::vector<FunctionMatrix> h_coefficients(const QDifferenceEquation& E, int count);
// G_[0] = Id, G_[1] = G1/T, G_[n+1] = G_[n]' + G_[n] G_[1]
std::vector<FunctionMatrix> g_coefficients(const DifferentialEquation& E, int count);
// F_[0] = Id, F_[1] = G/(qT), F_[n+1] = sigma_q(F_[n]) F_[1] + D_q(F_[n]) A
std::vector<FunctionMatrix> f_coefficients(const SigmaDeltaEquation& E, int count);

// A(q^n, T) = A(q^{n-1}T) ... A(qT) A(T)
FunctionMatrix iterate_cocycle(const FunctionMatrix& A, const PAdic& q, int n);

enum class SolutionBasis { standard, twisted };

// Y(x, c) = sum_n C_n (x - c)^n, or sum_n C_n (x - c)_{q,n} in the twisted basis.
struct TaylorSolution {
  PAdic c;
  SolutionBasis basis = SolutionBasis::standard;
  PAdic q;  // for the twisted basis
  std::vector<PMatrix> coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  std::size_t rank() const { return coeffs.front().rows(); }
  PMatrix evaluate(const PAdic& x) const;
  // Entries as series in (x - c), standard basis.
  Matrix<DiskSeries> series(const Rational& log_r) const;
};

TaylorSolution taylor_solution_at(const DifferentialEquation& E, const PAdic& c, int M);
// Refuses roots of unity.
TaylorSolution taylor_solution_at(const QDifferenceEquation& E, const PAdic& c, int M);
TaylorSolution taylor_solution_at(const SigmaDeltaEquation& E, const PAdic& c, int M);

// Coefficient matrices with the valuations of their denominators, shared by
// every radius computation on one equation.
struct RadiusData {
  DomainPtr X;
  std::optional<PAdic> q;
  std::vector<FunctionMatrix> mats;
  std::vector<Ext> denominator_valuation;
};

RadiusData radius_data(const QDifferenceEquation& E, int M);
RadiusData radius_data(const DifferentialEquation& E, int M);
RadiusData radius_data(const SigmaDeltaEquation& E, int M);

struct RadiusResult {
  Ext log_radius;        // ESTIMATE: min(rho_{t,X}, windowed estimate)
  Rational log_rho_tX;   // log rho of the generic point inside X
  RadiusEstimate estimate;
  bool saturated = false;  // the estimate is at least rho_{t,X}
  bool truncation_limited = false;
  // Same estimate with every norm raised to the tail bound; equals log_radius
  // when no tail reaches the computed norms.
  Ext pessimistic_log_radius;
  std::string str() const;
};

// Throws std::domain_error when |q - 1| max(|c|, rho) >= rho.
RadiusResult generic_radius(const RadiusData& D, const PAdic& c, const Rational& log_rho);
template <class E>
RadiusResult generic_radius(const E& eq, const PAdic& c, const Rational& log_rho, int M) {
  return generic_radius(radius_data(eq, M), c, log_rho);
}

struct ProfilePoint {
  Rational log_rho;
  std::optional<RadiusResult> result;
  std::string error;
};
std::vector<ProfilePoint> radius_profile(const RadiusData& D, const PAdic& c, const std::vector<Rational>& grid);

// log_p of omega rho / max(|A|, |G|/max(1, |c|/rho)) at (c, rho).
Ext rough_lower_bound(const SigmaDeltaEquation& E, const PAdic& c, const Rational& log_rho);

QDifferenceEquation tensor(const QDifferenceEquation& a, const QDifferenceEquation& b);
QDifferenceEquation hom(const QDifferenceEquation& m, const QDifferenceEquation& n);
QDifferenceEquation dual(const QDifferenceEquation& e);
DifferentialEquation tensor(const DifferentialEquation& a, const DifferentialEquation& b);
DifferentialEquation hom(const DifferentialEquation& m, const DifferentialEquation& n);
DifferentialEquation dual(const DifferentialEquation& e);
SigmaDeltaEquation tensor(const SigmaDeltaEquation& a, const SigmaDeltaEquation& b);
SigmaDeltaEquation hom(const SigmaDeltaEquation& m, const SigmaDeltaEquation& n);
SigmaDeltaEquation dual(const SigmaDeltaEquation& e);

Matrix<DiskSeries> taylor_at(const FunctionMatrix& m, const PAdic& c, int order);

inline const char* kSigmaLaw = "sigma-law sigma_q(Y) = A Y";
inline const char* kDeltaLaw = "delta-law delta_1(Y) = G1 Y";

// Y is expanded around its own center; its constant term must be invertible.
VerificationReport solution_check(const QDifferenceEquation& E, const Matrix<DiskSeries>& Y, const Ext& threshold);
VerificationReport solution_check(const DifferentialEquation& E, const Matrix<DiskSeries>& Y, const Ext& threshold);
VerificationReport solution_check(const SigmaDeltaEquation& E, const Matrix<DiskSeries>& Y, const Ext& threshold);

// min over entries of the radius-weighted coefficient valuation
Ext series_difference_valuation(const Matrix<DiskSeries>& a, const Matrix<DiskSeries>& b);

}  // namespace qconf
