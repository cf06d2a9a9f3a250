#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "problem.hpp"

namespace {

std::string cell(const nlohmann::json& t, const char* key) {
  if (!t.contains(key)) return "-";
  const auto& v = t[key];
  if (v.is_object() && v.contains("decimal")) return v["decimal"].get<std::string>();
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void print_table(const nlohmann::json& report, std::ostream& os) {
  os << "field: " << report.value("field", std::string("-")) << "  truncation: " << report.value("truncation", 0) << "\n";
  os << "idx  verb              verdict   min_diff_val   threshold   note\n";
  for (const auto& t : report["tasks"]) {
    std::string note = t.value("failed_law", std::string());
    if (t.contains("error")) note = t["error"].get<std::string>();
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-17s %-9s %-14s %-11s ", t["index"].dump().c_str(), t["verb"].get<std::string>().c_str(),
                  t["verdict"].get<std::string>().c_str(), cell(t, "min_difference_valuation").c_str(), cell(t, "threshold").c_str());
    os << line << note << "\n";
  }
  os << "verdict: " << report["verdict"].get<std::string>() << "\n";
  if (report.contains("error")) os << "error: " << report["error"].get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch driver for p-adic q-difference and differential equation problems"};
  std::string file, report_path;
  int precision = 0, truncation = 0;
  bool json_out = false;
  qconf::cli::RunOptions opt;
  app.add_option("problem", file, "problem file (JSON)")->required();
  app.add_option("--precision", precision, "p-adic precision N (digits)")->check(CLI::PositiveNumber);
  app.add_option("--truncation", truncation, "series truncation order M")->check(CLI::PositiveNumber);
  app.add_flag("--parallel", opt.parallel, "run independent tasks concurrently");
  app.add_flag("--override-admissibility", opt.override_admissibility, "deform even when admissibility is not certified");
  app.add_option("--report", report_path, "write the JSON report to this path");
  app.add_flag("--json", json_out, "print the JSON report instead of the table");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qconf::cli::kParseError;
  }
  if (precision > 0) opt.precision = precision;
  if (truncation > 0) opt.truncation = truncation;

  const auto res = qconf::cli::run_problem_file(file, opt);
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << report_path << "\n";
      return qconf::cli::kInternalError;
    }
    out << res.report.dump(2) << "\n";
  }
  if (json_out)
    std::cout << res.report.dump(2) << "\n";
  else
    print_table(res.report, std::cout);
  return res.exit_code;
}
