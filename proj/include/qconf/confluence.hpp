#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qconf/equations.hpp"

namespace qconf {

// Flags for |q-1| s_X < r <= R <= r_X, all radii as log_p.
struct AdmissibilityReport {
  Ext log_R = Ext::inf();  // min over the Shilov points of the generic radius
  Ext log_R_pessimistic = Ext::inf();  // same with norms raised to the tails
  Rational log_r{0};
  Rational log_s_X{0};
  Rational log_r_X{0};
  Ext log_q_minus_1 = Ext::neg_inf();
  Rational tolerance{0};

  bool q_in_disk = false;  // |q-1| s_X < r
  bool r_le_R = false;
  bool R_le_r_X = false;
  // The estimate is within the estimator's band of r, the tails could push
  // R below r, or some Shilov point could not be evaluated.
  bool inconclusive = false;
  std::vector<std::string> diagnostics;

  bool admissible() const { return q_in_disk && r_le_R && R_le_r_X && !inconclusive; }
  std::string str() const;
};

AdmissibilityReport check_admissible(const DifferentialEquation& E, const Rational& log_r, const PAdic& q, int M);
AdmissibilityReport check_admissible(const QDifferenceEquation& E, const Rational& log_r, int M);

struct DeformOptions {
  int M = 64;
  // Skip the admissibility gate; the output is then marked uncertified.
  bool override_admissibility = false;
};

struct Deformation {
  QDifferenceEquation E;
  AdmissibilityReport admissibility;
  bool certified = false;
};

// A(q', T) = sum_n G_[n](T) ((q'-1)T)^n / n!
Deformation deform(const DifferentialEquation& E, const PAdic& q_prime, const DeformOptions& opt = {});
// A(q', T) = sum_n H_n(T) T^n prod_{k<n}(q' - q^k) / [n]_q!
Deformation deform_between(const QDifferenceEquation& E, const PAdic& q_prime, const DeformOptions& opt = {});

enum class ConfluenceMode { derivative_of_family, iterated_limit };

struct ConfluenceResult {
  DifferentialEquation E;
  ConfluenceMode mode = ConfluenceMode::derivative_of_family;
  // iterated_limit: v(Delta_{n+1} - Delta_n) for n = 0, 1, ...
  std::vector<Ext> growth;
  bool converged = true;
  std::vector<std::string> diagnostics;
};

struct ConfluenceOptions {
  int M = 64;
  ConfluenceMode mode = ConfluenceMode::derivative_of_family;
  int steps = 6;  // iterated_limit only
};

ConfluenceResult confluence(const QDifferenceEquation& E, const ConfluenceOptions& opt = {});

// confluence(deform(E, q)) against E.
VerificationReport roundtrip_check(const DifferentialEquation& E, const PAdic& q, int M, const Ext& threshold);
// deform(confluence(E), q) against E.
VerificationReport roundtrip_check(const QDifferenceEquation& E, int M, const Ext& threshold);

// sigma_q(P) A P^{-1}
FunctionMatrix gauge_transform(const FunctionMatrix& A, const FunctionMatrix& P, const PAdic& q);
// delta_1(P) P^{-1} + P G1 P^{-1}
FunctionMatrix gauge_transform_delta(const FunctionMatrix& G1, const FunctionMatrix& P);

// {x : x^p in X}; X must be centered at 0.
DomainPtr frobenius_preimage(const Affinoid& X, int p);
// Coefficient Frobenius is the identity on every implemented field.
DifferentialEquation frobenius_pullback(const DifferentialEquation& E);
QDifferenceEquation frobenius_pullback(const QDifferenceEquation& E);
SigmaDeltaEquation frobenius_pullback(const SigmaDeltaEquation& E);
// log_p of min(r^{1/p}, r |p|^{-1})
Rational frobenius_radius_law(const Rational& log_r, int p);

// Y(T^{p^h}, c) Y(T, c)^{-1} from the Taylor solution at c, as series at c.
Matrix<DiskSeries> frobenius_matrix_candidate(const DifferentialEquation& E, const PAdic& c, int h, const Rational& log_r, int M);
// Checks Y(T^{p^h}, c) = H(T) Y(T, c) for the Taylor solution at c (default 1).
VerificationReport verify_frobenius_structure(const DifferentialEquation& E, const FunctionMatrix& H, int h, int M,
                                              const Ext& threshold, std::optional<PAdic> c = std::nullopt,
                                              std::optional<Rational> log_r = std::nullopt);

inline const char* kFrobeniusLaw = "frobenius Y(T^{p^h}) = H Y(T)";
inline const char* kRoundtripDiff = "roundtrip confluence(deform(G1)) = G1";
inline const char* kRoundtripQ = "roundtrip deform(confluence(A)) = A";

}  // namespace qconf
