#include "problem.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <sstream>
#include <variant>

#include "qconf/confluence.hpp"
#include "qconf/rank_one.hpp"

namespace qconf::cli {

using nlohmann::json;

namespace {

// ---- scalars ---------------------------------------------------------------

class ScalarParser {
 public:
  ScalarParser(const Field& F, const std::string& s) : F_(F), s_(s) {}

  PAdic parse() {
    PAdic v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ValidationError("scalar \"" + s_ + "\": " + why);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  PAdic expr() {
    PAdic v = term();
    for (;;) {
      if (eat('+'))
        v = v + term();
      else if (eat('-'))
        v = v - term();
      else
        return v;
    }
  }
  PAdic term() {
    PAdic v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        const PAdic d = unary();
        if (d.is_zero()) fail("division by zero");
        v = v / d;
      } else {
        return v;
      }
    }
  }
  PAdic unary() {
    if (eat('-')) return -unary();
    return power();
  }
  PAdic power() {
    PAdic b = atom();
    if (!eat('^')) return b;
    skip();
    bool neg = eat('-');
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("exponent must be an integer");
    const long e = std::stol(s_.substr(start, i_ - start));
    if (neg) {
      if (b.is_zero()) fail("negative power of zero");
      return b.inverse().pow(e);
    }
    return b.pow(e);
  }
  PAdic atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      PAdic v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    const char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return PAdic::from_int(F_, mpz_class(s_.substr(start, i_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = i_;
      while (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_]))) ++i_;
      const std::string id = s_.substr(start, i_ - start);
      if (id == "log" || id == "exp") {
        if (!eat('(')) fail(id + " needs an argument");
        PAdic x = expr();
        if (!eat(')')) fail("missing ')'");
        return id == "log" ? log_of(x) : exp_of(x);
      }
      if (id == "pi") return PAdic::uniformizer(F_);
      if (F_.level() < 0 && (id == "zeta" || id.rfind("pi", 0) == 0)) fail(id + " needs a cyclotomic field (s >= 0)");
      if (id == "zeta") return zeta(F_);
      if (id.size() == 3 && id.rfind("pi", 0) == 0 && std::isdigit(static_cast<unsigned char>(id[2]))) {
        const int m = id[2] - '0';
        if (m > F_.level()) fail(id + " needs s >= " + std::to_string(m));
        return pi_m(F_, m);
      }
      fail("unknown constant " + id);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  // sum (-1)^{n-1} (x-1)^n / n, |x - 1| < 1
  PAdic log_of(const PAdic& x) const {
    const PAdic y = x - PAdic::one(F_);
    if (y.is_zero()) return PAdic::zero(F_);
    const Ext v = y.valuation();
    if (!(v > Ext(0))) fail("log needs |x - 1| < 1");
    PAdic sum = PAdic::zero(F_), pw = PAdic::one(F_);
    const Ext stop(Rational(F_.precision() + 2));
    for (long n = 1;; ++n) {
      pw *= y;
      const PAdic t = pw.div_int(n);
      sum = n % 2 ? sum + t : sum - t;
      // later terms have valuation >= m v - log_p(m), increasing in m here
      long lg = 0;
      for (long m = 1; m <= n + 1; m *= F_.p()) ++lg;
      if (v * Rational(n + 1) - Ext(Rational(lg)) > stop) return sum;
    }
  }
  // sum x^n / n!, |x| < omega
  PAdic exp_of(const PAdic& x) const {
    if (x.is_zero()) return PAdic::one(F_);
    const Ext margin = x.valuation() - Ext(Rational(1, F_.p() - 1));
    if (!(margin > Ext(0))) fail("exp needs |x| < omega");
    PAdic sum = PAdic::one(F_), t = PAdic::one(F_);
    const Ext stop(Rational(F_.precision() + 2));
    for (long n = 1;; ++n) {
      t = (t * x).div_int(n);
      sum += t;
      if (margin * Rational(n + 1) > stop) return sum;
    }
  }

  const Field& F_;
  const std::string& s_;
  std::size_t i_ = 0;
};

// ---- json helpers ----------------------------------------------------------

const json& need(const json& o, const char* key, const std::string& where) {
  if (!o.is_object() || !o.contains(key)) throw ValidationError(where + ": missing \"" + key + "\"");
  return o.at(key);
}

std::string as_text(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  throw ValidationError(where + ": expected a string or an integer");
}

PAdic scalar(const Field& F, const json& v, const std::string& where) { return parse_scalar(F, as_text(v, where)); }

Rational rational(const json& v, const std::string& where) {
  const std::string t = as_text(v, where);
  try {
    return parse_rational(t);
  } catch (const std::exception& e) {
    throw ValidationError(where + ": bad rational \"" + t + "\"");
  }
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ValidationError(where + ": expected an integer");
  return v.get<int>();
}

json ext_json(const Ext& e) { return json{{"exact", e.str()}, {"decimal", e.decimal(6)}}; }

json report_json(const VerificationReport& r) {
  return json{{"verdict", r.passed ? "pass" : "fail"},
              {"min_difference_valuation", ext_json(r.min_difference_valuation)},
              {"threshold", ext_json(r.threshold)},
              {"failed_law", r.failed_law},
              {"diagnostics", r.diagnostics}};
}

json matrix_json(const FunctionMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str(6));
    rows.push_back(row);
  }
  return rows;
}

// ---- domains, functions, equations -----------------------------------------

DomainPtr parse_domain(const Field& F, const json& d) {
  const std::string w = "domain";
  Disk outer{scalar(F, d.value("center", json("0")), w + ".center"), rational(d.value("log_radius", json(0)), w + ".log_radius")};
  std::vector<Disk> holes;
  if (d.contains("holes")) {
    if (!d["holes"].is_array()) throw ValidationError("domain.holes: expected an array");
    for (const auto& h : d["holes"])
      holes.push_back({scalar(F, h.value("center", json("0")), "hole center"), rational(need(h, "log_radius", "hole"), "hole log_radius")});
  }
  try {
    return std::make_shared<const Affinoid>(F, outer, holes);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("domain: ") + e.what());
  }
}

AnalyticFunction parse_function(const DomainPtr& X, int M, const json& f, const std::string& where);

std::vector<PAdic> coeff_list(const Field& F, const json& a, const std::string& where) {
  if (!a.is_array()) throw ValidationError(where + ": expected an array of coefficients");
  std::vector<PAdic> r;
  for (std::size_t k = 0; k < a.size(); ++k) r.push_back(scalar(F, a[k], where + "[" + std::to_string(k) + "]"));
  return r;
}

AnalyticFunction parse_function(const DomainPtr& X, int M, const json& f, const std::string& where) {
  const Field& F = X->field();
  if (f.is_string() || f.is_number_integer()) return AnalyticFunction::constant(X, M, scalar(F, f, where));
  if (!f.is_object()) throw ValidationError(where + ": expected a function");
  AnalyticFunction r = AnalyticFunction::zero(X, M);
  bool any = false;
  auto check_degree = [&](std::size_t n, const std::string& key) {
    if (n > static_cast<std::size_t>(M) + 1) throw ValidationError(where + "." + key + ": degree exceeds the truncation");
  };
  if (f.contains("T")) {
    auto c = coeff_list(F, f["T"], where + ".T");
    check_degree(c.size(), "T");
    r += AnalyticFunction::from_T_poly(X, M, c);
    any = true;
  }
  if (f.contains("poly")) {
    auto c = coeff_list(F, f["poly"], where + ".poly");
    check_degree(c.size(), "poly");
    r += AnalyticFunction::from_poly(X, M, c);
    any = true;
  }
  if (f.contains("holes")) {
    const json& h = f["holes"];
    if (!h.is_array() || h.size() > X->hole_count()) throw ValidationError(where + ".holes: one list per hole of the domain");
    for (std::size_t i = 0; i < h.size(); ++i) {
      auto b = coeff_list(F, h[i], where + ".holes");
      check_degree(b.size(), "holes");
      for (std::size_t k = 0; k < b.size(); ++k)
        if (!b[k].is_zero()) r += AnalyticFunction::hole_term(X, M, i, static_cast<int>(k) + 1, b[k]);
    }
    any = true;
  }
  if (f.contains("sum")) {
    for (const auto& g : f["sum"]) r += parse_function(X, M, g, where + ".sum");
    any = true;
  }
  if (f.contains("product")) {
    AnalyticFunction p = AnalyticFunction::constant(X, M, PAdic::one(F));
    for (const auto& g : f["product"]) p *= parse_function(X, M, g, where + ".product");
    r += p;
    any = true;
  }
  if (f.contains("exp")) {
    if (X->hole_count() != 0) throw ValidationError(where + ".exp: only on disks");
    const AnalyticFunction g = parse_function(X, M, f["exp"], where + ".exp");
    const DiskSeries e = exp_series(g.taylor_at(X->outer().c, M));
    r += AnalyticFunction::from_poly(X, M, e.coeffs());
    any = true;
  }
  if (!any) throw ValidationError(where + ": no recognised key (T, poly, holes, sum, product, exp)");
  return r;
}

FunctionMatrix parse_matrix(const DomainPtr& X, int M, const json& m, const std::string& where) {
  if (!m.is_array()) return FunctionMatrix(1, 1, parse_function(X, M, m, where));
  if (m.empty() || !m[0].is_array()) throw ValidationError(where + ": expected a square array of rows");
  const std::size_t n = m.size();
  FunctionMatrix r(n, n, AnalyticFunction::zero(X, M));
  for (std::size_t i = 0; i < n; ++i) {
    if (!m[i].is_array() || m[i].size() != n) throw ValidationError(where + ": matrix must be square");
    for (std::size_t j = 0; j < n; ++j)
      r(i, j) = parse_function(X, M, m[i][j], where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  return r;
}

using Equation = std::variant<DifferentialEquation, QDifferenceEquation, SigmaDeltaEquation>;

Equation parse_equation(const Field& F, const DomainPtr& X0, int M, const json& e, const std::string& name) {
  const std::string w = "equation " + name;
  const DomainPtr X = e.contains("domain") ? parse_domain(F, e["domain"]) : X0;
  if (!X) throw ValidationError(w + ": no domain");
  const std::string type = as_text(need(e, "type", w), w + ".type");
  try {
    if (type == "unit") {
      const std::size_t n = e.contains("rank") ? static_cast<std::size_t>(integer(e["rank"], w + ".rank")) : 1;
      if (e.contains("q")) return unit_q_equation(X, M, scalar(F, e["q"], w + ".q"), n);
      return unit_differential_equation(X, M, n);
    }
    if (type == "differential") {
      DifferentialEquation E{X, parse_matrix(X, M, need(e, "G1", w), w + ".G1")};
      validate(E);
      return E;
    }
    if (type == "q_difference") {
      QDifferenceEquation E{X, scalar(F, need(e, "q", w), w + ".q"), parse_matrix(X, M, need(e, "A", w), w + ".A")};
      validate(E);
      return E;
    }
    if (type == "sigma_delta") {
      SigmaDeltaEquation E{X, scalar(F, need(e, "q", w), w + ".q"), parse_matrix(X, M, need(e, "A", w), w + ".A"),
                           parse_matrix(X, M, need(e, "G1", w), w + ".G1")};
      validate(E);
      return E;
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ValidationError(w + ": " + ex.what());
  }
  throw ValidationError(w + ": unknown type \"" + type + "\"");
}

WittVector parse_witt(const Field& F, const json& w, const std::string& where) {
  if (!w.is_array()) throw ValidationError(where + ": expected an array of components");
  WittVector r = witt_zero(F, w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const json& c = w[i];
    InvPoly f;
    if (c.is_array()) {
      f = coeff_list(F, c, where);
    } else if (c.is_object()) {
      for (const auto& [k, v] : c.items()) {
        std::size_t deg = 0;
        try {
          deg = std::stoul(k);
        } catch (const std::exception&) {
          throw ValidationError(where + ": component keys are powers of T^-1");
        }
        if (f.size() <= deg) f.resize(deg + 1, PAdic::zero(F));
        f[deg] = scalar(F, v, where);
      }
    } else {
      throw ValidationError(where + ": component must be a list or a map");
    }
    r.f[i] = f;
  }
  return r;
}

// ---- tasks -----------------------------------------------------------------

struct Context {
  const Field* F = nullptr;
  DomainPtr X;
  int M = 64;
  bool override_admissibility = false;
  std::map<std::string, Equation> equations;
};

struct Task {
  std::size_t index = 0;
  std::string verb;
  std::string output;
  std::function<json()> run;
};

template <class T>
const T& equation_as(const Context& ctx, const json& t, const std::string& w, const char* kind) {
  const std::string name = as_text(need(t, "equation", w), w + ".equation");
  auto it = ctx.equations.find(name);
  if (it == ctx.equations.end()) throw ValidationError(w + ": unknown equation \"" + name + "\"");
  if (!std::holds_alternative<T>(it->second)) throw ValidationError(w + ": equation \"" + name + "\" is not " + kind);
  return std::get<T>(it->second);
}

const Equation& any_equation(const Context& ctx, const json& t, const std::string& w) {
  const std::string name = as_text(need(t, "equation", w), w + ".equation");
  auto it = ctx.equations.find(name);
  if (it == ctx.equations.end()) throw ValidationError(w + ": unknown equation \"" + name + "\"");
  return it->second;
}

Ext threshold_of(const Context& ctx, const json& t, const std::string& w, int slack) {
  if (t.contains("threshold")) return Ext(rational(t["threshold"], w + ".threshold"));
  return Ext(Rational(ctx.F->precision() - slack));
}

json admissibility_json(const AdmissibilityReport& a) {
  return json{{"admissible", a.admissible()},
              {"log_R", ext_json(a.log_R)},
              {"log_r", ext_json(Ext(a.log_r))},
              {"log_q_minus_1", ext_json(a.log_q_minus_1)},
              {"inconclusive", a.inconclusive},
              {"diagnostics", a.diagnostics}};
}

std::vector<Rational> parse_grid(const json& g, const std::string& w) {
  std::vector<Rational> grid;
  if (g.is_array()) {
    for (const auto& x : g) grid.push_back(rational(x, w));
    return grid;
  }
  const Rational a = rational(need(g, "from", w), w + ".from");
  const Rational b = rational(need(g, "to", w), w + ".to");
  const int n = integer(need(g, "count", w), w + ".count");
  if (n < 0) throw ValidationError(w + ".count: negative");
  for (int k = 0; k < n; ++k) grid.push_back(n == 1 ? a : a + (b - a) * Rational(k, n - 1));
  return grid;
}

std::function<json()> prepare(const Context& ctx, const json& t, const std::string& verb, const std::string& w) {
  const Field& F = *ctx.F;
  const int M = t.contains("truncation") ? integer(t["truncation"], w + ".truncation") : ctx.M;
  if (M < 1) throw ValidationError(w + ": truncation must be positive");
  const bool override_gate = ctx.override_admissibility || t.value("override_admissibility", false);

  if (verb == "deform") {
    const auto& E = equation_as<DifferentialEquation>(ctx, t, w, "differential");
    const PAdic q = scalar(F, need(t, "q", w), w + ".q");
    std::optional<FunctionMatrix> expected;
    if (t.contains("expected")) expected = parse_matrix(E.X, M, t["expected"], w + ".expected");
    const Ext thr = threshold_of(ctx, t, w, 10);
    return [=]() {
      DeformOptions o;
      o.M = M;
      o.override_admissibility = override_gate;
      const Deformation d = deform(E, q, o);
      json r{{"certified", d.certified}, {"admissibility", admissibility_json(d.admissibility)}, {"A", matrix_json(d.E.A)}};
      bool ok = d.certified;
      if (expected) {
        const Ext v = difference_valuation(d.E.A - *expected);
        r["min_difference_valuation"] = ext_json(v);
        r["threshold"] = ext_json(thr);
        ok = ok && v >= thr;
      }
      r["verdict"] = ok ? "pass" : "fail";
      return r;
    };
  }
  if (verb == "deform_between") {
    const auto& E = equation_as<QDifferenceEquation>(ctx, t, w, "a q-difference equation");
    const PAdic q = scalar(F, need(t, "q", w), w + ".q");
    return [=]() {
      DeformOptions o;
      o.M = M;
      o.override_admissibility = override_gate;
      const Deformation d = deform_between(E, q, o);
      return json{{"verdict", d.certified ? "pass" : "fail"},
                  {"certified", d.certified},
                  {"admissibility", admissibility_json(d.admissibility)},
                  {"A", matrix_json(d.E.A)}};
    };
  }
  if (verb == "confluence") {
    const auto& E = equation_as<QDifferenceEquation>(ctx, t, w, "a q-difference equation");
    const std::string mode = t.value("mode", std::string("derivative"));
    if (mode != "derivative" && mode != "iterated") throw ValidationError(w + ".mode: derivative or iterated");
    const int steps = t.contains("steps") ? integer(t["steps"], w + ".steps") : 6;
    std::optional<FunctionMatrix> expected;
    if (t.contains("expected")) expected = parse_matrix(E.X, M, t["expected"], w + ".expected");
    const Ext thr = threshold_of(ctx, t, w, 12);
    return [=]() {
      ConfluenceOptions o;
      o.M = M;
      o.steps = steps;
      o.mode = mode == "iterated" ? ConfluenceMode::iterated_limit : ConfluenceMode::derivative_of_family;
      const ConfluenceResult c = confluence(E, o);
      json growth = json::array();
      for (const auto& g : c.growth) growth.push_back(ext_json(g));
      json r{{"G1", matrix_json(c.E.G1)}, {"converged", c.converged}, {"growth", growth}, {"diagnostics", c.diagnostics}};
      bool ok = c.converged;
      if (expected) {
        const Ext v = difference_valuation(c.E.G1 - *expected);
        r["min_difference_valuation"] = ext_json(v);
        r["threshold"] = ext_json(thr);
        ok = ok && v >= thr;
      }
      r["verdict"] = ok ? "pass" : "fail";
      return r;
    };
  }
  if (verb == "roundtrip") {
    const Equation& E = any_equation(ctx, t, w);
    const Ext thr = threshold_of(ctx, t, w, 12);
    if (const auto* d = std::get_if<DifferentialEquation>(&E)) {
      const PAdic q = scalar(F, need(t, "q", w), w + ".q");
      const DifferentialEquation Ed = *d;
      return [=]() { return report_json(roundtrip_check(Ed, q, M, thr)); };
    }
    if (const auto* qd = std::get_if<QDifferenceEquation>(&E)) {
      const QDifferenceEquation Eq = *qd;
      return [=]() { return report_json(roundtrip_check(Eq, M, thr)); };
    }
    throw ValidationError(w + ": roundtrip needs a differential or q-difference equation");
  }
  if (verb == "frobenius") {
    const auto& E = equation_as<DifferentialEquation>(ctx, t, w, "differential");
    const FunctionMatrix H = parse_matrix(E.X, M, need(t, "H", w), w + ".H");
    const int h = t.contains("h") ? integer(t["h"], w + ".h") : 1;
    const Ext thr = threshold_of(ctx, t, w, 10);
    std::optional<PAdic> c;
    if (t.contains("c")) c = scalar(F, t["c"], w + ".c");
    std::optional<Rational> log_r;
    if (t.contains("log_r")) log_r = rational(t["log_r"], w + ".log_r");
    return [=]() { return report_json(verify_frobenius_structure(E, H, h, M, thr, c, log_r)); };
  }
  if (verb == "solution_check") {
    const Equation& E = any_equation(ctx, t, w);
    const Ext thr = threshold_of(ctx, t, w, 10);
    const PAdic c = t.contains("c") ? scalar(F, t["c"], w + ".c") : std::visit([](const auto& e) { return e.X->outer().c; }, E);
    std::optional<Matrix<DiskSeries>> Y;
    std::optional<Rational> log_r;
    if (t.contains("log_r")) log_r = rational(t["log_r"], w + ".log_r");
    if (t.contains("solution")) {
      const DomainPtr X = std::visit([](const auto& e) { return e.X; }, E);
      const FunctionMatrix S = parse_matrix(X, M, t["solution"], w + ".solution");
      Y = taylor_at(S, c, M);
    }
    const std::string from = t.value("taylor_of", std::string("self"));
    if (from != "self" && from != "q_part" && from != "delta_part") throw ValidationError(w + ".taylor_of: self, q_part or delta_part");
    return [=]() {
      Matrix<DiskSeries> sol;
      if (Y) {
        sol = *Y;
      } else {
        const Rational lr = log_r ? *log_r : std::visit([&](const auto& e) { return e.X->rho(c); }, E);
        TaylorSolution s;
        if (const auto* sd = std::get_if<SigmaDeltaEquation>(&E)) {
          if (from == "q_part")
            s = taylor_solution_at(sd->q_part(), c, M);
          else if (from == "delta_part")
            s = taylor_solution_at(sd->delta_part(), c, M);
          else
            s = taylor_solution_at(*sd, c, M);
        } else {
          s = std::visit([&](const auto& e) { return taylor_solution_at(e, c, M); }, E);
        }
        sol = s.series(lr);
      }
      return report_json(std::visit([&](const auto& e) { return solution_check(e, sol, thr); }, E));
    };
  }
  if (verb == "generic_radius") {
    const Equation& E = any_equation(ctx, t, w);
    const PAdic c = scalar(F, t.value("c", json("0")), w + ".c");
    const Rational lr = rational(need(t, "log_rho", w), w + ".log_rho");
    return [=]() {
      const RadiusResult r = std::visit([&](const auto& e) { return generic_radius(e, c, lr, M); }, E);
      return json{{"verdict", "info"},
                  {"log_radius", ext_json(r.log_radius)},
                  {"log_rho_tX", ext_json(Ext(r.log_rho_tX))},
                  {"saturated", r.saturated},
                  {"truncation_limited", r.truncation_limited},
                  {"detail", r.str()}};
    };
  }
  if (verb == "radius_profile") {
    const Equation& E = any_equation(ctx, t, w);
    const PAdic c = scalar(F, t.value("c", json("0")), w + ".c");
    const std::vector<Rational> grid = parse_grid(t.value("grid", json::array()), w + ".grid");
    return [=]() {
      const RadiusData D = std::visit([&](const auto& e) { return radius_data(e, M); }, E);
      const auto prof = radius_profile(D, c, grid);
      json pts = json::array();
      for (const auto& pt : prof) {
        json p{{"log_rho", ext_json(Ext(pt.log_rho))}};
        if (pt.result)
          p["log_radius"] = ext_json(pt.result->log_radius);
        else
          p["error"] = pt.error;
        pts.push_back(p);
      }
      const Rational tol = estimator_tolerance(M, F.p());
      return json{{"verdict", "info"},
                  {"points", pts},
                  {"concave_within_tolerance", profile_concave(prof, tol)},
                  {"tolerance", ext_json(Ext(tol))},
                  {"profile", profile_table(prof)}};
    };
  }
  if (verb == "admissible") {
    const Equation& E = any_equation(ctx, t, w);
    const Rational lr = rational(need(t, "log_r", w), w + ".log_r");
    if (const auto* d = std::get_if<DifferentialEquation>(&E)) {
      const PAdic q = scalar(F, need(t, "q", w), w + ".q");
      const DifferentialEquation Ed = *d;
      return [=]() {
        const auto a = check_admissible(Ed, lr, q, M);
        json r = admissibility_json(a);
        r["verdict"] = a.admissible() ? "pass" : "fail";
        return r;
      };
    }
    if (const auto* qd = std::get_if<QDifferenceEquation>(&E)) {
      const QDifferenceEquation Eq = *qd;
      return [=]() {
        const auto a = check_admissible(Eq, lr, M);
        json r = admissibility_json(a);
        r["verdict"] = a.admissible() ? "pass" : "fail";
        return r;
      };
    }
    throw ValidationError(w + ": admissible needs a differential or q-difference equation");
  }
  if (verb == "rank1") {
    const std::string sub = as_text(need(t, "sub", w), w + ".sub");
    const WittVector wv = parse_witt(F, need(t, "witt", w), w + ".witt");
    if (sub == "exp") {
      return [=]() {
        const PiExponential e = pi_exponential(wv, M);
        return json{{"verdict", e.in_pi_s_ball ? "pass" : "fail"},
                    {"witt", wv.str()},
                    {"series", e.series.str(8)},
                    {"in_pi_s_ball", e.in_pi_s_ball}};
      };
    }
    if (sub == "operator") {
      const PAdic a0 = scalar(F, t.value("a0", json("0")), w + ".a0");
      const DomainPtr X = t.contains("domain") ? parse_domain(F, t["domain"]) : ctx.X;
      return [=]() {
        const DifferentialEquation E = solvable_operator(a0, wv, X, M);
        return json{{"verdict", "info"}, {"witt", wv.str()}, {"G1", matrix_json(E.G1)}};
      };
    }
    if (sub == "deform") {
      const PAdic q = scalar(F, need(t, "q", w), w + ".q");
      const bool expect = t.value("expect_robba", true);
      return [=]() {
        const DeformedRankOne d = rank_one_deformed_matrix(wv, q, M);
        return json{{"verdict", d.in_robba() == expect ? "pass" : "fail"},
                    {"series", d.series.str(8)},
                    {"min_valuation", ext_json(d.min_valuation)},
                    {"log_radius_estimate", ext_json(d.radius.log_radius)},
                    {"tolerance", ext_json(Ext(d.tolerance))},
                    {"integral", d.integral},
                    {"overconvergent", d.overconvergent},
                    {"in_robba", d.in_robba()},
                    {"diagnostics", d.diagnostics}};
      };
    }
    throw ValidationError(w + ".sub: exp, operator or deform");
  }
  throw ValidationError(w + ": unknown verb \"" + verb + "\"");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

PAdic parse_scalar(const Field& F, const std::string& text) { return ScalarParser(F, text).parse(); }

std::string profile_table(const std::vector<ProfilePoint>& profile) {
  std::ostringstream os;
  os << "# log_rho log_radius\n";
  for (const auto& pt : profile) {
    if (!pt.result) continue;
    os << rational_decimal(pt.log_rho, 6) << " " << pt.result->log_radius.decimal(6) << "\n";
  }
  return os.str();
}

bool profile_concave(const std::vector<ProfilePoint>& profile, const Rational& tol) {
  std::vector<std::pair<Rational, Rational>> pts;
  for (const auto& pt : profile)
    if (pt.result && pt.result->log_radius.finite()) pts.emplace_back(pt.log_rho, pt.result->log_radius.value());
  for (std::size_t i = 0; i + 2 < pts.size(); ++i)
    for (std::size_t j = i + 1; j + 1 < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        const auto& [x0, y0] = pts[i];
        const auto& [x1, y1] = pts[j];
        const auto& [x2, y2] = pts[k];
        const Rational chord = (y0 * (x2 - x1) + y2 * (x1 - x0)) / (x2 - x0);
        if (chord - y1 > tol) return false;
      }
  return true;
}

RunResult run_problem(const std::string& text, const RunOptions& opt) {
  RunResult res;
  res.report = json{{"schema", kReportSchema}, {"tasks", json::array()}};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    res.exit_code = kParseError;
    res.report["verdict"] = "parse_error";
    res.report["error"] = e.what();
    return res;
  }

  Context ctx;
  std::vector<Task> tasks;
  try {
    if (!doc.is_object()) throw ValidationError("problem: expected an object");
    const json tl = doc.value("tasks", json::array());
    if (!tl.is_array()) throw ValidationError("tasks: expected an array");
    if (!doc.contains("field") && tl.empty() && !doc.contains("equations")) {
      res.report["verdict"] = "pass";
      return res;
    }
    const json& f = need(doc, "field", "problem");
    const int p = integer(need(f, "p", "field"), "field.p");
    const int s = f.contains("s") ? integer(f["s"], "field.s") : -1;
    const int N = opt.precision ? *opt.precision : (f.contains("precision") ? integer(f["precision"], "field.precision") : 50);
    try {
      ctx.F = &make_field(p, s, N);
    } catch (const std::exception& e) {
      throw ValidationError(std::string("field: ") + e.what());
    }
    ctx.M = opt.truncation ? *opt.truncation : (doc.contains("truncation") ? integer(doc["truncation"], "truncation") : 64);
    ctx.override_admissibility = opt.override_admissibility;
    if (doc.contains("domain")) ctx.X = parse_domain(*ctx.F, doc["domain"]);
    if (doc.contains("equations")) {
      if (!doc["equations"].is_object()) throw ValidationError("equations: expected a map");
      for (const auto& [name, e] : doc["equations"].items()) ctx.equations.emplace(name, parse_equation(*ctx.F, ctx.X, ctx.M, e, name));
    }
    for (std::size_t i = 0; i < tl.size(); ++i) {
      const std::string w = "task " + std::to_string(i);
      Task task;
      task.index = i;
      task.verb = as_text(need(tl[i], "verb", w), w + ".verb");
      if (tl[i].contains("output")) task.output = as_text(tl[i]["output"], w + ".output");
      task.run = prepare(ctx, tl[i], task.verb, w);
      tasks.push_back(std::move(task));
    }
    res.report["field"] = ctx.F->str();
    res.report["truncation"] = ctx.M;
  } catch (const ValidationError& e) {
    res.exit_code = kValidationError;
    res.report["verdict"] = "validation_error";
    res.report["error"] = e.what();
    return res;
  } catch (const std::exception& e) {
    res.exit_code = kInternalError;
    res.report["verdict"] = "internal_error";
    res.report["error"] = e.what();
    return res;
  }

  struct Outcome {
    json j;
    bool internal = false;
  };
  auto execute = [](const Task& t) {
    Outcome o;
    try {
      o.j = t.run();
    } catch (const DomainError& e) {
      o.j = json{{"verdict", "fail"}, {"error", e.what()}};
    } catch (const std::domain_error& e) {
      o.j = json{{"verdict", "fail"}, {"error", e.what()}};
    } catch (const PrecisionError& e) {
      o.j = json{{"verdict", "fail"}, {"error", e.what()}};
    } catch (const std::exception& e) {
      o.j = json{{"verdict", "internal_error"}, {"error", e.what()}};
      o.internal = true;
    }
    o.j["index"] = t.index;
    o.j["verb"] = t.verb;
    return o;
  };

  std::vector<Outcome> outcomes(tasks.size());
  if (opt.parallel) {
    std::vector<std::future<Outcome>> fut;
    for (const auto& t : tasks) fut.push_back(std::async(std::launch::async, execute, std::cref(t)));
    for (std::size_t i = 0; i < fut.size(); ++i) outcomes[i] = fut[i].get();
  } else {
    for (std::size_t i = 0; i < tasks.size(); ++i) outcomes[i] = execute(tasks[i]);
  }

  bool failed = false, internal = false;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    Outcome& o = outcomes[i];
    internal = internal || o.internal;
    failed = failed || o.j["verdict"] == "fail";
    if (!tasks[i].output.empty()) {
      try {
        if (tasks[i].verb == "radius_profile" && o.j.contains("profile"))
          write_file(tasks[i].output, o.j["profile"].get<std::string>());
        else
          write_file(tasks[i].output, o.j.dump(2) + "\n");
      } catch (const std::exception& e) {
        o.j["output_error"] = e.what();
        internal = true;
      }
    }
    res.report["tasks"].push_back(o.j);
  }
  res.exit_code = internal ? kInternalError : failed ? kVerificationFailed : kOk;
  res.report["verdict"] = internal ? "internal_error" : failed ? "fail" : "pass";
  return res;
}

RunResult run_problem_file(const std::string& path, const RunOptions& opt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    RunResult r;
    r.exit_code = kParseError;
    r.report = json{{"schema", kReportSchema}, {"tasks", json::array()}, {"verdict", "parse_error"}, {"error", "cannot read " + path}};
    return r;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return run_problem(ss.str(), opt);
}

}  // namespace qconf::cli
