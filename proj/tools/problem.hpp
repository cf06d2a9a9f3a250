#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qconf/equations.hpp"

namespace qconf::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kParseError = 2,
  kValidationError = 3,
  kInternalError = 4,
};

inline constexpr const char* kReportSchema = "qconf-report/1";

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::optional<int> precision;   // overrides field.precision
  std::optional<int> truncation;  // default 64
  bool parallel = false;
  bool override_admissibility = false;
};

struct RunResult {
  int exit_code = kOk;
  nlohmann::json report;
};

// Scalar expressions: integers, + - * / ^, parentheses and the constants
// pi (uniformizer), zeta, pi0 .. pi9 (pi_m).
PAdic parse_scalar(const Field& F, const std::string& text);

// Runs every task of a problem; never throws.
RunResult run_problem(const std::string& text, const RunOptions& opt);
RunResult run_problem_file(const std::string& path, const RunOptions& opt);

// Two numeric columns (log rho, log estimate) after a header line.
std::string profile_table(const std::vector<ProfilePoint>& profile);

// Pairwise second differences of the finite points, each at most tol.
bool profile_concave(const std::vector<ProfilePoint>& profile, const Rational& tol);

}  // namespace qconf::cli
